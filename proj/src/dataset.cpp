#include "kpls/dataset.hpp"

#include "kpls/errors.hpp"

#include <algorithm>
#include <cmath>

namespace kpls {

void Dataset::validate() const {
    const Index l = features.rows();
    if (static_cast<Index>(sample_ids.size()) != l)
        throw data_error("dataset has " + std::to_string(sample_ids.size()) + " sample ids for " +
                         std::to_string(l) + " rows");
    if (static_cast<Index>(feature_names.size()) != features.cols())
        throw data_error("dataset has " + std::to_string(feature_names.size()) +
                         " feature names for " + std::to_string(features.cols()) + " columns");
    if (response && response->size() != l)
        throw data_error("response length " + std::to_string(response->size()) +
                         " does not match sample count " + std::to_string(l));
    if (!features.allFinite()) throw data_error("dataset features contain non-finite entries");
    if (response && !response->allFinite())
        throw data_error("dataset response contains non-finite entries");
}

const char* to_string(ScaleMode mode) {
    return mode == ScaleMode::mad_median ? "mad-median" : "mean-abs";
}

ScaleMode scale_mode_from_string(const std::string& name) {
    if (name == "mad-median") return ScaleMode::mad_median;
    if (name == "mean-abs") return ScaleMode::mean_absolute;
    throw config_error("unknown scaling mode '" + name + "' (expected mad-median or mean-abs)");
}

double median(std::vector<double> values) {
    if (values.empty()) throw config_error("median of an empty sequence");
    const size_t n = values.size();
    const size_t mid = n / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    double upper = values[mid];
    if (n % 2 == 1) return upper;
    double lower = *std::max_element(values.begin(), values.begin() + mid);
    return (lower + upper) / 2.0;
}

ScalingParams scale_fit(const Eigen::Ref<const Matrix>& features, ScaleMode mode) {
    const Index l = features.rows();
    const Index p = features.cols();
    if (l < 1) throw config_error("scale_fit requires at least one sample");

    ScalingParams params;
    params.medians.resize(p);
    params.deviations.resize(p);
    params.degenerate_mask.assign(static_cast<size_t>(p), false);

    std::vector<double> column(static_cast<size_t>(l));
    for (Index j = 0; j < p; ++j) {
        for (Index i = 0; i < l; ++i) column[static_cast<size_t>(i)] = features(i, j);
        const double med = median(column);
        params.medians[j] = med;

        for (Index i = 0; i < l; ++i)
            column[static_cast<size_t>(i)] = std::abs(features(i, j) - med);
        double dev = 0.0;
        if (mode == ScaleMode::mad_median) {
            dev = median(column);
        } else {
            for (double v : column) dev += v;
            dev /= static_cast<double>(l);
        }
        params.deviations[j] = dev;
        params.degenerate_mask[static_cast<size_t>(j)] = dev == 0.0;
    }
    return params;
}

ScalingParams scale_fit(const Dataset& data, ScaleMode mode) {
    return scale_fit(data.features, mode);
}

Matrix scale_apply(const Eigen::Ref<const Matrix>& features, const ScalingParams& params) {
    if (features.cols() != params.size())
        throw data_error("scale_apply: features have " + std::to_string(features.cols()) +
                         " columns, scaling params have " + std::to_string(params.size()));
    Matrix scaled(features.rows(), features.cols());
    for (Index j = 0; j < features.cols(); ++j) {
        if (params.degenerate_mask[static_cast<size_t>(j)]) {
            scaled.col(j).setZero();
        } else {
            scaled.col(j) = (features.col(j).array() - params.medians[j]) / params.deviations[j];
        }
    }
    return scaled;
}

Dataset scale_apply(const Dataset& data, const ScalingParams& params) {
    Dataset scaled = data;
    scaled.features = scale_apply(data.features, params);
    return scaled;
}

} // namespace kpls
