#include "kpls/synthetic.hpp"

#include "kpls/errors.hpp"

#include <cmath>
#include <numbers>

namespace kpls {

double NormalSampler::operator()() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // 53-bit uniforms; u1 shifted into (0, 1] so the log is finite.
    const double u1 = 1.0 - static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    const double u2 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

const char* to_string(SyntheticModel model) {
    return model == SyntheticModel::linear ? "linear" : "sine";
}

SyntheticModel synthetic_model_from_string(const std::string& name) {
    if (name == "linear") return SyntheticModel::linear;
    if (name == "sine") return SyntheticModel::sine;
    throw config_error("unknown synthetic model '" + name + "' (expected linear or sine)");
}

Dataset gen_synthetic(const SyntheticSpec& spec) {
    if (spec.rows < 1 || spec.cols < 1)
        throw config_error("gen_synthetic: rows and cols must be positive");
    if (spec.noise < 0.0) throw config_error("gen_synthetic: noise must be >= 0");

    NormalSampler normal(spec.seed);

    Dataset data;
    data.features.resize(spec.rows, spec.cols);
    for (Index i = 0; i < spec.rows; ++i)
        for (Index j = 0; j < spec.cols; ++j) data.features(i, j) = normal();

    data.sample_ids.reserve(static_cast<size_t>(spec.rows));
    for (Index i = 0; i < spec.rows; ++i)
        data.sample_ids.push_back(spec.id_prefix + std::to_string(i + 1));
    data.feature_names.reserve(static_cast<size_t>(spec.cols));
    for (Index j = 0; j < spec.cols; ++j) data.feature_names.push_back("f" + std::to_string(j + 1));

    if (spec.with_response) {
        Vector direction(spec.cols);
        for (Index j = 0; j < spec.cols; ++j) direction[j] = normal();
        direction /= direction.norm();

        Vector projection = data.features * direction;
        Vector clean(spec.rows);
        if (spec.model == SyntheticModel::linear) {
            clean = projection;
        } else {
            for (Index i = 0; i < spec.rows; ++i)
                clean[i] = std::sin(spec.frequency * projection[i]);
        }

        const double sd =
            std::sqrt((clean.array() - clean.mean()).square().sum() / static_cast<double>(spec.rows));
        Vector y = clean;
        if (spec.noise > 0.0)
            for (Index i = 0; i < spec.rows; ++i) y[i] += spec.noise * sd * normal();
        data.response = std::move(y);
    }

    return data;
}

} // namespace kpls
