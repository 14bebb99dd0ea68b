#include "kpls/model_selection.hpp"

#include "kpls/detail/parallel.hpp"
#include "kpls/errors.hpp"
#include "kpls/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace kpls {

double r_squared(const Eigen::Ref<const Vector>& actual,
                 const Eigen::Ref<const Vector>& predicted) {
    if (actual.size() != predicted.size())
        throw data_error("r_squared: vectors of length " + std::to_string(actual.size()) +
                         " and " + std::to_string(predicted.size()));
    if (actual.size() < 2) throw config_error("r_squared: needs at least two samples");

    const double mean = actual.mean();
    const double denominator = (actual.array() - mean).matrix().squaredNorm();
    if (denominator == 0.0)
        throw degeneracy_error("r_squared: constant response has no variance about its mean");
    const double numerator = (actual - predicted).squaredNorm();
    return 1.0 - numerator / denominator;
}

const char* to_string(FoldScaling mode) {
    return mode == FoldScaling::strict ? "strict" : "global";
}

FoldScaling fold_scaling_from_string(const std::string& name) {
    if (name == "strict") return FoldScaling::strict;
    if (name == "global") return FoldScaling::global;
    throw config_error("unknown fold scaling '" + name + "' (expected strict or global)");
}

void SearchConfig::validate() const {
    if (nu_min < 1 || nu_max < nu_min)
        throw config_error("search: nu range [" + std::to_string(nu_min) + ", " +
                           std::to_string(nu_max) + "] is empty or invalid");
    if (!(eta_min > 0.0) || !(eta_max >= eta_min))
        throw config_error("search: eta bounds must satisfy 0 < min <= max");
    if (eta_init && (*eta_init < eta_min || *eta_init > eta_max))
        throw config_error("search: eta_init outside the eta bounds");
    if (!(simplex_tolerance > 0.0)) throw config_error("search: simplex tolerance must be positive");
    if (max_simplex_evals < 1) throw config_error("search: simplex budget must be positive");
}

// ---------------------------------------------------------------------------
// LooEvaluator

struct LooEvaluator::Impl {
    struct Fold {
        Matrix sqdist;       // (l-1) x (l-1), gaussian/exponential families
        Vector sqdist_test;  // held-out row
        Matrix gram;         // linear family
        Vector gram_test;
        Vector y_train;
    };

    KernelFamily family;
    CvOptions options;
    Index l = 0;
    Vector y;
    std::vector<Fold> folds;
    double median_distance = 1.0;

    bool needs_distances() const { return family != KernelFamily::linear; }

    Impl(const Dataset& data, KernelFamily kernel_family, const CvOptions& opts)
        : family(kernel_family), options(opts) {
        data.validate();
        if (!data.response) throw data_error("loo_cv: dataset has no response column");
        l = data.sample_count();
        if (l < 3) throw config_error("loo_cv: needs at least 3 samples, got " + std::to_string(l));
        y = *data.response;

        const Matrix global_scaled =
            scale_apply(data.features, scale_fit(data.features, options.fit.scale_mode));

        if (needs_distances()) {
            std::vector<double> distances;
            distances.reserve(static_cast<size_t>(l) * static_cast<size_t>(l - 1) / 2);
            for (Index i = 0; i < l; ++i)
                for (Index j = i + 1; j < l; ++j)
                    distances.push_back(
                        std::sqrt((global_scaled.row(i) - global_scaled.row(j)).squaredNorm()));
            median_distance = median(std::move(distances));
            if (median_distance <= 0.0) median_distance = 1.0;
        }

        folds.resize(static_cast<size_t>(l));
        detail::parallel_for(l, options.threads, [&](Index i) {
            build_fold(data, global_scaled, i);
        });
    }

    void build_fold(const Dataset& data, const Matrix& global_scaled, Index holdout) {
        Fold& fold = folds[static_cast<size_t>(holdout)];
        const Index n = l - 1;

        Matrix train(n, data.feature_count());
        Eigen::RowVectorXd test;
        if (options.fold_scaling == FoldScaling::strict) {
            Matrix raw(n, data.feature_count());
            Index r = 0;
            for (Index i = 0; i < l; ++i)
                if (i != holdout) raw.row(r++) = data.features.row(i);
            const ScalingParams params = scale_fit(raw, options.fit.scale_mode);
            train = scale_apply(raw, params);
            test = scale_apply(data.features.row(holdout), params).row(0);
        } else {
            Index r = 0;
            for (Index i = 0; i < l; ++i)
                if (i != holdout) train.row(r++) = global_scaled.row(i);
            test = global_scaled.row(holdout);
        }

        fold.y_train.resize(n);
        Index r = 0;
        for (Index i = 0; i < l; ++i)
            if (i != holdout) fold.y_train[r++] = y[i];

        if (needs_distances()) {
            fold.sqdist.resize(n, n);
            for (Index a = 0; a < n; ++a) {
                fold.sqdist(a, a) = 0.0;
                for (Index b = a + 1; b < n; ++b) {
                    const double sq = (train.row(a) - train.row(b)).squaredNorm();
                    fold.sqdist(a, b) = sq;
                    fold.sqdist(b, a) = sq;
                }
            }
            fold.sqdist_test.resize(n);
            for (Index a = 0; a < n; ++a)
                fold.sqdist_test[a] = (test - train.row(a)).squaredNorm();
        } else {
            fold.gram.noalias() = train * train.transpose();
            fold.gram_test.noalias() = train * test.transpose();
        }
    }

    Matrix fold_kernel(const Fold& fold, const KernelSpec& spec) const {
        if (spec.family == KernelFamily::linear) return fold.gram;
        const Index n = fold.sqdist.rows();
        Matrix kernel(n, n);
        for (Index a = 0; a < n; ++a) {
            for (Index b = a; b < n; ++b) {
                const double value =
                    spec.family == KernelFamily::gaussian
                        ? detail::gaussian_of_sqdist(fold.sqdist(a, b), spec.eta)
                        : detail::exponential_of_dist(std::sqrt(fold.sqdist(a, b)), spec.eta);
                kernel(a, b) = value;
                kernel(b, a) = value;
            }
        }
        return kernel;
    }

    Vector fold_cross(const Fold& fold, const KernelSpec& spec) const {
        if (spec.family == KernelFamily::linear) return fold.gram_test;
        const Index n = fold.sqdist_test.size();
        Vector cross(n);
        for (Index a = 0; a < n; ++a)
            cross[a] = spec.family == KernelFamily::gaussian
                           ? detail::gaussian_of_sqdist(fold.sqdist_test[a], spec.eta)
                           : detail::exponential_of_dist(std::sqrt(fold.sqdist_test[a]), spec.eta);
        return cross;
    }

    CvResult evaluate(const KernelSpec& spec, int nu) const {
        spec.validate();
        if (spec.family != family)
            throw config_error("LooEvaluator built for " + std::string(to_string(family)) +
                               " kernels, asked to evaluate " + to_string(spec.family));
        if (nu < 1 || nu > static_cast<int>(l) - 1)
            throw config_error("loo_cv: latent count " + std::to_string(nu) +
                               " outside [1, " + std::to_string(l - 1) + "] (folds train on l-1 samples)");

        CvResult result;
        result.nu = nu;
        if (spec.family != KernelFamily::linear) result.eta = spec.eta;
        result.predictions =
            Vector::Constant(l, std::numeric_limits<double>::quiet_NaN());
        std::vector<std::string> failures(static_cast<size_t>(l));

        detail::parallel_for(l, options.threads, [&](Index i) {
            const Fold& fold = folds[static_cast<size_t>(i)];
            try {
                Matrix kernel = fold_kernel(fold, spec);
                Vector cross = fold_cross(fold, spec);
                Vector y_train = fold.y_train;
                double y_offset = 0.0;

                if (options.fit.centering) {
                    CenteredKernel centered = center_kernel(KernelMatrix{std::move(kernel), spec});
                    kernel = std::move(centered.kernel.values);
                    cross = center_cross_kernel(cross.transpose(), centered.centering)
                                .row(0)
                                .transpose();
                    y_offset = y_train.mean();
                    y_train.array() -= y_offset;
                }

                const LatentFit fit = detail::kpls_fit_core(kernel, y_train, nu);
                const Vector beta =
                    compute_beta(fit.y_scores, fit.x_scores, kernel, y_train);
                result.predictions[i] = cross.dot(beta) + y_offset;
            } catch (const degeneracy_error& e) {
                failures[static_cast<size_t>(i)] = e.what();
            }
        });

        for (Index i = 0; i < l; ++i)
            if (!failures[static_cast<size_t>(i)].empty())
                result.fold_failures.push_back({i, failures[static_cast<size_t>(i)]});
        if (result.fold_failures.empty()) result.r2 = r_squared(y, result.predictions);
        return result;
    }
};

LooEvaluator::LooEvaluator(const Dataset& data, KernelFamily family, const CvOptions& options)
    : impl_(std::make_unique<Impl>(data, family, options)) {}

LooEvaluator::~LooEvaluator() = default;
LooEvaluator::LooEvaluator(LooEvaluator&&) noexcept = default;
LooEvaluator& LooEvaluator::operator=(LooEvaluator&&) noexcept = default;

CvResult LooEvaluator::evaluate(const KernelSpec& spec, int nu) const {
    return impl_->evaluate(spec, nu);
}

double LooEvaluator::median_pairwise_distance() const { return impl_->median_distance; }

Index LooEvaluator::sample_count() const { return impl_->l; }

KernelFamily LooEvaluator::family() const { return impl_->family; }

CvResult loo_cv(const Dataset& data, const KernelSpec& spec, int nu, const CvOptions& options) {
    spec.validate();
    return LooEvaluator(data, spec.family, options).evaluate(spec, nu);
}

// ---------------------------------------------------------------------------
// Hyperparameter search

EtaSearchResult optimize_eta(const LooEvaluator& evaluator, KernelFamily family, int nu,
                             const SearchConfig& config) {
    config.validate();
    if (family == KernelFamily::linear)
        throw config_error("optimize_eta: the linear kernel has no width parameter");

    const double eta0 = config.eta_init ? *config.eta_init : evaluator.median_pairwise_distance();
    if (eta0 < config.eta_min || eta0 > config.eta_max)
        throw config_error("optimize_eta: initial eta " + std::to_string(eta0) +
                           " outside bounds [" + std::to_string(config.eta_min) + ", " +
                           std::to_string(config.eta_max) + "]");

    const double infeasible = std::numeric_limits<double>::infinity();
    auto objective = [&](double log_eta) {
        const double eta = std::exp(log_eta);
        if (eta < config.eta_min || eta > config.eta_max) return infeasible;
        const CvResult cv = evaluator.evaluate({family, eta}, nu);
        return cv.r2 ? -*cv.r2 : infeasible;
    };

    SimplexOptions simplex;
    simplex.tolerance = config.simplex_tolerance;
    simplex.max_evaluations = config.max_simplex_evals;
    const SimplexResult best = nelder_mead_1d(
        objective, std::log(eta0), 0.5, simplex,
        [](double a, double b) { return std::abs(std::exp(a) - std::exp(b)); });

    if (!std::isfinite(best.value))
        throw degeneracy_error("optimize_eta: every evaluation infeasible (family=" +
                               std::string(to_string(family)) + ", nu=" + std::to_string(nu) + ")");
    return {std::exp(best.x), -best.value, best.evaluations};
}

EtaSearchResult optimize_eta(const Dataset& data, KernelFamily family, int nu,
                             const SearchConfig& config, const CvOptions& options) {
    return optimize_eta(LooEvaluator(data, family, options), family, nu, config);
}

SearchResult search_hyperparameters(const Dataset& data, KernelFamily family,
                                    const SearchConfig& config, const CvOptions& options) {
    config.validate();
    const LooEvaluator evaluator(data, family, options);

    // A fold trains on l-1 samples, so larger nu cannot fit.
    const int nu_hi = std::min<int>(config.nu_max, static_cast<int>(evaluator.sample_count()) - 1);

    bool found = false;
    double best_r2 = -std::numeric_limits<double>::infinity();
    int best_nu = 0;
    std::optional<double> best_eta;

    for (int nu = config.nu_min; nu <= nu_hi; ++nu) {
        double r2;
        std::optional<double> eta;
        if (family == KernelFamily::linear) {
            const CvResult cv = evaluator.evaluate({KernelFamily::linear, 1.0}, nu);
            if (!cv.r2) continue;
            r2 = *cv.r2;
        } else {
            EtaSearchResult search;
            try {
                search = optimize_eta(evaluator, family, nu, config);
            } catch (const degeneracy_error&) {
                continue;
            }
            r2 = search.r2;
            eta = search.eta;
        }

        // Ascending nu plus strict improvement breaks r2 ties toward smaller
        // nu. Each nu is visited once, so the smaller-eta rule for exact
        // (r2, nu) ties never has two candidates to separate here; it lives
        // in optimize_eta's deterministic descent.
        const bool better = !found || r2 > best_r2;
        if (better) {
            found = true;
            best_r2 = r2;
            best_nu = nu;
            best_eta = eta;
        }
    }

    if (!found)
        throw degeneracy_error("search_hyperparameters: every configuration infeasible (family=" +
                               std::string(to_string(family)) + ", nu in [" +
                               std::to_string(config.nu_min) + ", " + std::to_string(nu_hi) + "])");

    const KernelSpec best_spec{family, best_eta.value_or(1.0)};
    SearchResult result;
    result.nu = best_nu;
    result.eta = best_eta;
    result.cv = evaluator.evaluate(best_spec, best_nu);
    return result;
}

} // namespace kpls
