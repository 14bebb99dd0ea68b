#pragma once

#include "kpls/kpls.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace kpls {

/// r^2 = 1 - |y - z|^2 / |y - E(y)|^2. May be negative. Throws
/// degeneracy_error for constant y (zero denominator).
double r_squared(const Eigen::Ref<const Vector>& actual, const Eigen::Ref<const Vector>& predicted);

/// Whether leave-one-out folds refit the scaling on their own training rows
/// (strict, no leakage) or reuse scaling fit once on the full calibration set
/// (the literal order of operations in classical workflows).
enum class FoldScaling { strict, global };

const char* to_string(FoldScaling mode);
FoldScaling fold_scaling_from_string(const std::string& name);

struct CvOptions {
    FitOptions fit;
    FoldScaling fold_scaling = FoldScaling::strict;
    int threads = 0; // 0 = hardware concurrency
};

struct FoldFailure {
    Index sample_index;
    std::string reason;
};

/// Assembled leave-one-out result. predictions[i] comes from a model that
/// never saw sample i; entries for failed folds are NaN and r2 is absent
/// whenever any fold failed.
struct CvResult {
    Vector predictions;
    std::optional<double> r2;
    int nu = 0;
    std::optional<double> eta;
    std::vector<FoldFailure> fold_failures;
};

/// Precomputes per-fold scaled geometry (squared distances and Gram blocks)
/// once, so repeated evaluations across (nu, eta) only map cached distances
/// through the kernel. Fold kernels are bit-identical to what a from-scratch
/// refit on the fold's rows would produce.
class LooEvaluator {
public:
    LooEvaluator(const Dataset& data, KernelFamily family, const CvOptions& options = {});
    ~LooEvaluator();
    LooEvaluator(LooEvaluator&&) noexcept;
    LooEvaluator& operator=(LooEvaluator&&) noexcept;

    CvResult evaluate(const KernelSpec& spec, int nu) const;

    /// Median pairwise distance between globally scaled samples; the default
    /// eta seed for width searches. Falls back to 1 when all pairs coincide.
    double median_pairwise_distance() const;

    Index sample_count() const;
    KernelFamily family() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-shot leave-one-out cross-validation: for each sample, rescale (per
/// fold_scaling), fit on the remaining l-1 samples, predict the held-out
/// one; r^2 is computed once over the assembled prediction vector.
CvResult loo_cv(const Dataset& data, const KernelSpec& spec, int nu,
                const CvOptions& options = {});

struct SearchConfig {
    int nu_min = 1;
    int nu_max = 20;
    std::optional<double> eta_init; // unset => median pairwise distance
    double eta_min = 1e-12;
    double eta_max = 1e12;
    double simplex_tolerance = 1e-3; // width in eta units
    int max_simplex_evals = 60;

    void validate() const;
};

struct EtaSearchResult {
    double eta = 0.0;
    double r2 = 0.0;
    int evaluations = 0;
};

/// One-dimensional Nelder-Mead over log eta maximizing the LOO r^2 at fixed
/// nu. Gaussian/exponential families only.
EtaSearchResult optimize_eta(const LooEvaluator& evaluator, KernelFamily family, int nu,
                             const SearchConfig& config);
EtaSearchResult optimize_eta(const Dataset& data, KernelFamily family, int nu,
                             const SearchConfig& config, const CvOptions& options = {});

struct SearchResult {
    int nu = 0;
    std::optional<double> eta;
    CvResult cv;
};

/// Grid over nu crossed with the eta simplex (skipped for linear); the best
/// (nu, eta) by LOO r^2 wins, ties broken toward smaller nu, then smaller
/// eta. Throws degeneracy_error when every configuration is infeasible.
SearchResult search_hyperparameters(const Dataset& data, KernelFamily family,
                                    const SearchConfig& config, const CvOptions& options = {});

} // namespace kpls
