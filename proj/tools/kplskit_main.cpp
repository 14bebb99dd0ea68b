// Batch front end: ingest delimited tables, search hyperparameters, fit and
// persist models, predict, and export molecular descriptors.

#include "kpls/descriptors.hpp"
#include "kpls/errors.hpp"
#include "kpls/kpls.hpp"
#include "kpls/model_io.hpp"
#include "kpls/model_selection.hpp"
#include "kpls/report.hpp"
#include "kpls/synthetic.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace kpls;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_data = 2;
constexpr int exit_degenerate = 3;

struct ModelOptions {
    std::string family = "gaussian";
    bool centering = false;
    std::string scaling = "mad-median";
    std::string fold_scaling = "strict";
    int threads = 0;
};

struct SearchOptions {
    int nu_min = 1;
    int nu_max = 20;
    double eta_init = 0.0; // 0 = auto (median pairwise distance)
    double eta_min = 1e-12;
    double eta_max = 1e12;
    double simplex_tol = 1e-3;
    int max_simplex_evals = 60;
};

void add_model_options(CLI::App* cmd, ModelOptions& opts) {
    cmd->add_option("--family", opts.family, "Kernel family: linear, gaussian or exponential")
        ->check(CLI::IsMember({"linear", "gaussian", "exponential"}));
    cmd->add_flag("--centering", opts.centering, "Center the kernel matrix and the response");
    cmd->add_option("--scaling", opts.scaling, "Deviation estimator: mad-median or mean-abs")
        ->check(CLI::IsMember({"mad-median", "mean-abs"}));
    cmd->add_option("--threads", opts.threads, "Worker threads (0 = hardware)");
}

void add_search_options(CLI::App* cmd, SearchOptions& opts) {
    cmd->add_option("--nu-min", opts.nu_min, "Smallest latent-variable count");
    cmd->add_option("--nu-max", opts.nu_max, "Largest latent-variable count");
    cmd->add_option("--eta-init", opts.eta_init,
                    "Initial kernel width (0 = median pairwise distance)");
    cmd->add_option("--eta-min", opts.eta_min, "Lower eta bound");
    cmd->add_option("--eta-max", opts.eta_max, "Upper eta bound");
    cmd->add_option("--simplex-tol", opts.simplex_tol, "Simplex width stop, in eta units");
    cmd->add_option("--max-simplex-evals", opts.max_simplex_evals,
                    "Objective evaluation budget per nu");
}

CvOptions to_cv_options(const ModelOptions& opts) {
    CvOptions cv;
    cv.fit.centering = opts.centering;
    cv.fit.scale_mode = scale_mode_from_string(opts.scaling);
    cv.fold_scaling = fold_scaling_from_string(opts.fold_scaling);
    cv.threads = opts.threads;
    return cv;
}

SearchConfig to_search_config(const SearchOptions& opts) {
    SearchConfig config;
    config.nu_min = opts.nu_min;
    config.nu_max = opts.nu_max;
    if (opts.eta_init != 0.0) config.eta_init = opts.eta_init;
    config.eta_min = opts.eta_min;
    config.eta_max = opts.eta_max;
    config.simplex_tolerance = opts.simplex_tol;
    config.max_simplex_evals = opts.max_simplex_evals;
    return config;
}

void require_distinct_paths(const std::vector<std::string>& paths) {
    std::set<std::string> seen;
    for (const auto& path : paths)
        if (!path.empty() && !seen.insert(path).second)
            throw config_error("input and output paths must be distinct: '" + path + "'");
}

// ---------------------------------------------------------------------------

int run_search(const std::string& data_path, const std::string& report_path,
               const ModelOptions& model_opts, const SearchOptions& search_opts) {
    require_distinct_paths({data_path, report_path});
    const Dataset data = load_table(data_path, ResponseColumn::required);
    const KernelFamily family = kernel_family_from_string(model_opts.family);
    const CvOptions cv_opts = to_cv_options(model_opts);
    const SearchConfig config = to_search_config(search_opts);

    const SearchResult result = search_hyperparameters(data, family, config, cv_opts);

    SearchReport report;
    report.family = family;
    report.centering = cv_opts.fit.centering;
    report.scale_mode = cv_opts.fit.scale_mode;
    report.fold_scaling = cv_opts.fold_scaling;
    report.nu_min = config.nu_min;
    report.nu_max = config.nu_max;
    report.eta_init = config.eta_init;
    report.simplex_tolerance = config.simplex_tolerance;
    report.max_simplex_evals = config.max_simplex_evals;
    report.result = result;
    report.sample_ids = data.sample_ids;
    report.actual = *data.response;
    write_search_report(report, report_path);

    std::cout << "best nu: " << result.nu;
    if (result.eta) std::cout << "  eta: " << *result.eta;
    if (result.cv.r2) std::cout << "  loo r2: " << *result.cv.r2;
    std::cout << "\nreport written to " << report_path << '\n';
    return exit_ok;
}

int run_fit(const std::string& data_path, const std::string& model_path,
            const std::string& from_report, int nu, double eta, const ModelOptions& model_opts,
            const CLI::App* cmd) {
    require_distinct_paths({data_path, model_path, from_report});

    KernelFamily family = kernel_family_from_string(model_opts.family);
    FitOptions fit_opts;
    fit_opts.centering = model_opts.centering;
    fit_opts.scale_mode = scale_mode_from_string(model_opts.scaling);
    std::optional<double> width;
    if (eta > 0.0) width = eta;

    if (!from_report.empty()) {
        // Report values seed the configuration; explicit flags win.
        const ReportHyperparameters params = read_search_report(from_report);
        if (cmd->count("--family") == 0) family = params.family;
        if (cmd->count("--nu") == 0) nu = params.nu;
        if (cmd->count("--eta") == 0) width = params.eta;
        if (cmd->count("--centering") == 0) fit_opts.centering = params.centering;
        if (cmd->count("--scaling") == 0) fit_opts.scale_mode = params.scale_mode;
    }
    if (nu < 1) throw config_error("fit: --nu (or --from-report) is required");
    if (family != KernelFamily::linear && !width)
        throw config_error("fit: --eta (or --from-report) is required for " +
                           std::string(to_string(family)) + " kernels");

    const Dataset data = load_table(data_path, ResponseColumn::required);
    const KernelSpec spec{family, width.value_or(1.0)};
    const KplsModel model = fit_model(data, spec, nu, fit_opts);
    save_model(model, model_path);

    std::cout << "fitted " << to_string(family) << " model with " << model.latent_count
              << " latent variable(s)";
    if (model.early_stopped) std::cout << " (early stop before " << nu << ")";
    std::cout << "\nmodel written to " << model_path << '\n';
    return exit_ok;
}

int run_predict(const std::string& model_path, const std::string& data_path,
                const std::string& out_path) {
    require_distinct_paths({model_path, data_path, out_path});
    const KplsModel model = load_model(model_path);
    const Dataset data = load_table(data_path, ResponseColumn::auto_detect);

    PredictReport report;
    report.sample_ids = data.sample_ids;
    report.predicted = kpls_predict(model, data);
    report.actual = data.response;
    write_predict_report(report, out_path);

    std::cout << "predictions for " << data.sample_count() << " sample(s) written to " << out_path
              << '\n';
    if (report.actual)
        std::cout << "prediction-set r2: " << r_squared(*report.actual, report.predicted) << '\n';
    return exit_ok;
}

// ---------------------------------------------------------------------------
// Descriptor export

struct DescriptorBlock {
    std::vector<std::string> ids;
    std::vector<std::string> column_names;
    Matrix values;
};

DescriptorBlock expand_sequences(const std::string& sequences_path,
                                 const std::string& matrix_path) {
    const SimilMatrix matrix = load_simil_matrix(matrix_path);

    std::ifstream in(sequences_path);
    if (!in) throw data_error("cannot open sequence file '" + sequences_path + "'");

    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        std::istringstream stream(line);
        std::string id, sequence;
        if (!(stream >> id)) continue; // blank line
        if (!(stream >> sequence))
            throw data_error("sequence file '" + sequences_path + "' line " +
                             std::to_string(line_number) + ": expected 'id sequence'");
        entries.emplace_back(id, sequence);
    }
    if (entries.empty()) throw data_error("sequence file '" + sequences_path + "' has no entries");

    const size_t length = entries.front().second.size();
    for (const auto& [id, sequence] : entries)
        if (sequence.size() != length)
            throw data_error("sequence for '" + id + "' has length " +
                             std::to_string(sequence.size()) + ", expected " +
                             std::to_string(length));

    DescriptorBlock block;
    block.values.resize(static_cast<Index>(entries.size()), static_cast<Index>(20 * length));
    for (size_t k = 0; k < length; ++k)
        for (char residue : matrix.residue_order)
            block.column_names.push_back("pos" + std::to_string(k + 1) + "_" +
                                         std::string(1, residue));
    Index row = 0;
    for (const auto& [id, sequence] : entries) {
        block.ids.push_back(id);
        block.values.row(row++) = simil_expand(sequence, matrix).transpose();
    }
    return block;
}

DescriptorBlock expand_graphs(const std::string& list_path,
                              const std::vector<std::string>& properties, int max_bin) {
    if (properties.empty()) throw config_error("descriptors: --property is required with --graphs");

    std::ifstream in(list_path);
    if (!in) throw data_error("cannot open graph list '" + list_path + "'");
    const std::filesystem::path base_dir = std::filesystem::path(list_path).parent_path();

    DescriptorBlock block;
    for (const auto& property : properties)
        for (int d = 0; d <= max_bin; ++d)
            block.column_names.push_back(property + "_rad" + std::to_string(d));

    std::vector<std::vector<double>> rows;
    std::string line;
    size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        std::istringstream stream(line);
        std::string id, path;
        if (!(stream >> id)) continue;
        if (!(stream >> path))
            throw data_error("graph list '" + list_path + "' line " + std::to_string(line_number) +
                             ": expected 'id path'");
        std::filesystem::path graph_path(path);
        if (graph_path.is_relative()) graph_path = base_dir / graph_path;
        const MolGraph graph = load_molgraph(graph_path.string());

        std::vector<double> row;
        bool dropped = false;
        for (const auto& property : properties) {
            const RadVector rad = rad_autocorrelation(graph, property, max_bin);
            dropped = dropped || rad.dropped_unreachable_pairs;
            for (Index d = 0; d < rad.bins.size(); ++d) row.push_back(rad.bins[d]);
        }
        if (dropped)
            std::cerr << "warning: graph '" << id
                      << "' is disconnected; unreachable pairs excluded\n";
        block.ids.push_back(id);
        rows.push_back(std::move(row));
    }
    if (block.ids.empty()) throw data_error("graph list '" + list_path + "' has no entries");

    block.values.resize(static_cast<Index>(rows.size()),
                        static_cast<Index>(block.column_names.size()));
    for (Index i = 0; i < block.values.rows(); ++i)
        for (Index j = 0; j < block.values.cols(); ++j)
            block.values(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    return block;
}

int run_descriptors(const DescriptorBlock& block, const std::string& join_path,
                    const std::string& out_path) {
    Dataset output;
    if (join_path.empty()) {
        output.sample_ids = block.ids;
        output.feature_names = block.column_names;
        output.features = block.values;
    } else {
        // Join by sample id onto the base table; row order follows the base.
        std::map<std::string, Index> index;
        for (size_t i = 0; i < block.ids.size(); ++i) {
            if (!index.emplace(block.ids[i], static_cast<Index>(i)).second)
                throw data_error("duplicate descriptor sample id '" + block.ids[i] + "'");
        }
        const Dataset base = load_table(join_path, ResponseColumn::auto_detect);
        output.sample_ids = base.sample_ids;
        output.feature_names = base.feature_names;
        output.feature_names.insert(output.feature_names.end(), block.column_names.begin(),
                                    block.column_names.end());
        output.response = base.response;
        output.features.resize(base.sample_count(), base.feature_count() + block.values.cols());
        for (Index i = 0; i < base.sample_count(); ++i) {
            const auto it = index.find(base.sample_ids[static_cast<size_t>(i)]);
            if (it == index.end())
                throw data_error("sample id '" + base.sample_ids[static_cast<size_t>(i)] +
                                 "' has no descriptor row");
            output.features.row(i) << base.features.row(i), block.values.row(it->second);
        }
    }
    write_table(output, out_path);
    std::cout << block.column_names.size() << " descriptor column(s) for " << output.sample_count()
              << " sample(s) written to " << out_path << '\n';
    return exit_ok;
}

int run_gen_synthetic(Index rows, Index cols, std::uint64_t seed, const std::string& model_name,
                      double frequency, double noise, const std::string& out_path,
                      Index prediction_rows, const std::string& prediction_out,
                      bool prediction_with_response) {
    require_distinct_paths({out_path, prediction_out});
    if (prediction_rows > 0 && prediction_out.empty())
        throw config_error("gen-synthetic: --prediction-out is required with --prediction-rows");

    SyntheticSpec spec;
    spec.rows = rows + prediction_rows;
    spec.cols = cols;
    spec.seed = seed;
    spec.model = synthetic_model_from_string(model_name);
    spec.frequency = frequency;
    spec.noise = noise;
    const Dataset all = gen_synthetic(spec);

    Dataset calibration;
    calibration.features = all.features.topRows(rows);
    calibration.response = Vector(all.response->head(rows));
    calibration.sample_ids.assign(all.sample_ids.begin(), all.sample_ids.begin() + rows);
    calibration.feature_names = all.feature_names;
    write_table(calibration, out_path);
    std::cout << "calibration table " << rows << " x " << cols << " written to " << out_path
              << '\n';

    if (prediction_rows > 0) {
        Dataset prediction;
        prediction.features = all.features.bottomRows(prediction_rows);
        if (prediction_with_response)
            prediction.response = Vector(all.response->tail(prediction_rows));
        for (Index i = 0; i < prediction_rows; ++i)
            prediction.sample_ids.push_back("p" + std::to_string(i + 1));
        prediction.feature_names = all.feature_names;
        write_table(prediction, prediction_out);
        std::cout << "prediction table " << prediction_rows << " x " << cols << " written to "
                  << prediction_out << '\n';
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"kernel partial least squares regression toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI file supplying any option; flags override");

    std::function<int()> action;

    // search -----------------------------------------------------------
    auto* search = app.add_subcommand("search", "Joint nu/eta search by leave-one-out r2");
    {
        static std::string data_path, report_path;
        static ModelOptions model_opts;
        static SearchOptions search_opts;
        search->add_option("--data", data_path, "Calibration table with a response column")
            ->required();
        search->add_option("--report", report_path, "Output report path")->required();
        add_model_options(search, model_opts);
        search->add_option("--fold-scaling", model_opts.fold_scaling,
                           "Rescale per fold (strict) or once globally (global)")
            ->check(CLI::IsMember({"strict", "global"}));
        add_search_options(search, search_opts);
        search->callback(
            [&] { action = [&] { return run_search(data_path, report_path, model_opts, search_opts); }; });
    }

    // fit ---------------------------------------------------------------
    auto* fit = app.add_subcommand("fit", "Fit a model at fixed hyperparameters and persist it");
    {
        static std::string data_path, model_path, from_report;
        static int nu = 0;
        static double eta = 0.0;
        static ModelOptions model_opts;
        fit->add_option("--data", data_path, "Calibration table with a response column")
            ->required();
        fit->add_option("--model-out", model_path, "Output model path")->required();
        fit->add_option("--nu", nu, "Latent-variable count");
        fit->add_option("--eta", eta, "Kernel width");
        fit->add_option("--from-report", from_report, "Take hyperparameters from a search report");
        add_model_options(fit, model_opts);
        fit->callback([&, fit] {
            action = [&, fit] {
                return run_fit(data_path, model_path, from_report, nu, eta, model_opts, fit);
            };
        });
    }

    // predict -------------------------------------------------------------
    auto* predict = app.add_subcommand("predict", "Apply a persisted model to a feature table");
    {
        static std::string model_path, data_path, out_path;
        predict->add_option("--model", model_path, "Model file from fit")->required();
        predict->add_option("--data", data_path, "Feature table; response column optional")
            ->required();
        predict->add_option("--out", out_path, "Output prediction report")->required();
        predict->callback(
            [&] { action = [&] { return run_predict(model_path, data_path, out_path); }; });
    }

    // descriptors -----------------------------------------------------------
    auto* descriptors =
        app.add_subcommand("descriptors", "Export RAD or SIMIL descriptor columns");
    {
        static std::string sequences_path, matrix_path, graphs_path, join_path, out_path;
        static std::vector<std::string> properties;
        static int max_bin = 5;
        descriptors->add_option("--sequences", sequences_path,
                                "Residue sequence file: one 'id sequence' per line");
        descriptors->add_option("--simil-matrix", matrix_path,
                                "20x20 similarity matrix (SIMIL mode)");
        descriptors->add_option("--graphs", graphs_path,
                                "Graph manifest: one 'id path' per line (RAD mode)");
        descriptors->add_option("--property", properties, "Atomic property name (repeatable)");
        descriptors->add_option("--max-bin", max_bin, "Largest topological distance bin");
        descriptors->add_option("--join", join_path, "Append columns to this table, matched by id");
        descriptors->add_option("--out", out_path, "Output table")->required();
        descriptors->callback([&] {
            action = [&] {
                require_distinct_paths({sequences_path, matrix_path, graphs_path, join_path, out_path});
                const bool simil_mode = !sequences_path.empty();
                const bool rad_mode = !graphs_path.empty();
                if (simil_mode == rad_mode)
                    throw config_error(
                        "descriptors: give exactly one of --sequences (with --simil-matrix) or --graphs");
                if (simil_mode && matrix_path.empty())
                    throw config_error("descriptors: --simil-matrix is required with --sequences");
                const DescriptorBlock block =
                    simil_mode ? expand_sequences(sequences_path, matrix_path)
                               : expand_graphs(graphs_path, properties, max_bin);
                return run_descriptors(block, join_path, out_path);
            };
        });
    }

    // gen-synthetic -----------------------------------------------------------
    auto* gen = app.add_subcommand("gen-synthetic", "Write a deterministic synthetic dataset");
    {
        static Index rows = 0, cols = 0, prediction_rows = 0;
        static std::uint64_t seed = 0;
        static std::string model_name = "linear", out_path, prediction_out;
        static double frequency = 2.0, noise = 0.05;
        static bool prediction_with_response = false;
        gen->add_option("--rows", rows, "Calibration sample count")->required();
        gen->add_option("--cols", cols, "Feature count")->required();
        gen->add_option("--seed", seed, "Generator seed")->required();
        gen->add_option("--model", model_name, "Response model: linear or sine")
            ->check(CLI::IsMember({"linear", "sine"}));
        gen->add_option("--frequency", frequency, "Sine frequency");
        gen->add_option("--noise", noise, "Noise, as a fraction of the clean response sd");
        gen->add_option("--out", out_path, "Output calibration table")->required();
        gen->add_option("--prediction-rows", prediction_rows,
                        "Also write a prediction table with this many samples");
        gen->add_option("--prediction-out", prediction_out, "Prediction table path");
        gen->add_flag("--prediction-with-response", prediction_with_response,
                      "Keep the response column in the prediction table");
        gen->callback([&] {
            action = [&] {
                return run_gen_synthetic(rows, cols, seed, model_name, frequency, noise, out_path,
                                         prediction_rows, prediction_out,
                                         prediction_with_response);
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        return action();
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const data_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_data;
    } catch (const degeneracy_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_degenerate;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_data;
    }
}
