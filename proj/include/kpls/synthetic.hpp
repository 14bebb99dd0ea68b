#pragma once

#include "kpls/dataset.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace kpls {

/// Standard normal draws via Box-Muller over mt19937_64, so sequences are
/// identical across standard-library implementations.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

    double operator()();

private:
    std::mt19937_64 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

enum class SyntheticModel { linear, sine };

const char* to_string(SyntheticModel model);
SyntheticModel synthetic_model_from_string(const std::string& name);

/// Deterministic generator: features are iid N(0,1); the response is a unit
/// random projection passed through the model (identity or sine), plus
/// Gaussian noise scaled to `noise` times the clean response's standard
/// deviation. Draw order is fixed: features row-major, projection, noise.
struct SyntheticSpec {
    Index rows = 0;
    Index cols = 0;
    std::uint64_t seed = 0;
    SyntheticModel model = SyntheticModel::linear;
    double frequency = 2.0; // sine only: y = sin(frequency * <x, w>)
    double noise = 0.05;
    bool with_response = true;
    std::string id_prefix = "s";
};

Dataset gen_synthetic(const SyntheticSpec& spec);

} // namespace kpls
