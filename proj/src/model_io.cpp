#include "kpls/model_io.hpp"

#include "kpls/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <string>

namespace kpls {

namespace {

using nlohmann::json;

constexpr const char* format_tag = "kpls-model-v1";

json to_json(const Vector& v) {
    json array = json::array();
    for (Index i = 0; i < v.size(); ++i) array.push_back(v[i]);
    return array;
}

json to_json(const Matrix& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Vector vector_from_json(const json& array) {
    Vector v(static_cast<Index>(array.size()));
    Index i = 0;
    for (const auto& value : array) v[i++] = value.get<double>();
    return v;
}

Matrix matrix_from_json(const json& rows, Index expected_cols = -1) {
    const Index r = static_cast<Index>(rows.size());
    Index c = expected_cols;
    if (c < 0) c = r > 0 ? static_cast<Index>(rows.front().size()) : 0;
    Matrix m(r, c);
    Index i = 0;
    for (const auto& row : rows) {
        if (static_cast<Index>(row.size()) != c)
            throw data_error("model file: ragged matrix row");
        Index j = 0;
        for (const auto& value : row) m(i, j++) = value.get<double>();
        ++i;
    }
    return m;
}

} // namespace

void save_model(const KplsModel& model, std::ostream& out) {
    json doc;
    doc["format"] = format_tag;
    doc["kernel"] = {{"family", to_string(model.kernel.family)}, {"eta", model.kernel.eta}};
    doc["scaling"] = {{"mode", to_string(model.scale_mode)},
                      {"medians", to_json(model.scaling.medians)},
                      {"deviations", to_json(model.scaling.deviations)}};
    doc["latent_count"] = model.latent_count;
    doc["early_stopped"] = model.early_stopped;
    doc["centering"] = model.centering;
    doc["response_mean"] = model.response_mean;
    doc["coefficients"] = to_json(model.coefficients);
    doc["x_scores"] = to_json(model.x_scores);
    doc["y_scores"] = to_json(model.y_scores);
    doc["train_features"] = to_json(model.train_features);
    doc["feature_names"] = model.feature_names;
    if (model.centering)
        doc["kernel_centering"] = {
            {"column_means", to_json(model.kernel_centering.train_column_means)},
            {"grand_mean", model.kernel_centering.grand_mean}};

    out << doc.dump() << '\n';
}

void save_model(const KplsModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write model file '" + path + "'");
    save_model(model, out);
    if (!out) throw data_error("failed while writing model file '" + path + "'");
}

KplsModel load_model(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw data_error(std::string("model file is not valid JSON: ") + e.what());
    }

    try {
        if (doc.at("format").get<std::string>() != format_tag)
            throw data_error("model file has unknown format tag '" +
                             doc.at("format").get<std::string>() + "'");

        KplsModel model;
        model.kernel.family =
            kernel_family_from_string(doc.at("kernel").at("family").get<std::string>());
        model.kernel.eta = doc.at("kernel").at("eta").get<double>();
        model.scale_mode = scale_mode_from_string(doc.at("scaling").at("mode").get<std::string>());
        model.scaling.medians = vector_from_json(doc.at("scaling").at("medians"));
        model.scaling.deviations = vector_from_json(doc.at("scaling").at("deviations"));
        model.scaling.degenerate_mask.resize(static_cast<size_t>(model.scaling.size()));
        for (Index j = 0; j < model.scaling.size(); ++j)
            model.scaling.degenerate_mask[static_cast<size_t>(j)] =
                model.scaling.deviations[j] == 0.0;

        model.latent_count = doc.at("latent_count").get<int>();
        model.early_stopped = doc.at("early_stopped").get<bool>();
        model.centering = doc.at("centering").get<bool>();
        model.response_mean = doc.at("response_mean").get<double>();
        model.coefficients = vector_from_json(doc.at("coefficients"));
        model.x_scores = matrix_from_json(doc.at("x_scores"), model.latent_count);
        model.y_scores = matrix_from_json(doc.at("y_scores"), model.latent_count);
        model.train_features = matrix_from_json(doc.at("train_features"), model.scaling.size());
        model.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
        if (model.centering) {
            model.kernel_centering.train_column_means =
                vector_from_json(doc.at("kernel_centering").at("column_means"));
            model.kernel_centering.grand_mean =
                doc.at("kernel_centering").at("grand_mean").get<double>();
        }

        if (model.coefficients.size() != model.train_features.rows() ||
            model.x_scores.rows() != model.train_features.rows())
            throw data_error("model file: inconsistent sample counts across fields");
        return model;
    } catch (const json::exception& e) {
        throw data_error(std::string("model file is missing fields: ") + e.what());
    }
}

KplsModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open model file '" + path + "'");
    return load_model(in);
}

} // namespace kpls
