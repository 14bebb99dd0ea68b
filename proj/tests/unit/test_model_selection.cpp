#include "kpls/model_selection.hpp"
#include "kpls/errors.hpp"
#include "kpls/simplex.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace kpls;

namespace {

Dataset linear_line_dataset(Index l) {
    // One feature, y = 2x, noiseless. The grid is symmetric with a duplicated
    // zero, so removing any single sample leaves the median at 0 and the MAD
    // unchanged: strict per-fold rescaling is exactly fold-invariant and the
    // through-origin linear kernel recovers the line.
    REQUIRE(l >= 4);
    REQUIRE(l % 2 == 0);
    Dataset data;
    data.features.resize(l, 1);
    const Index half = (l - 2) / 2;
    Index row = 0;
    for (Index i = -half; i < 0; ++i) data.features(row++, 0) = static_cast<double>(i);
    data.features(row++, 0) = 0.0;
    data.features(row++, 0) = 0.0;
    for (Index i = 1; i <= half; ++i) data.features(row++, 0) = static_cast<double>(i);
    data.response = Vector(2.0 * data.features.col(0));
    for (Index i = 0; i < l; ++i) data.sample_ids.push_back("s" + std::to_string(i + 1));
    data.feature_names = {"x"};
    return data;
}

// From-scratch leave-one-out oracle: refit scaling and model per fold through
// the public single-model path, no caching.
Vector loo_oracle(const Dataset& data, const KernelSpec& spec, int nu, const CvOptions& options) {
    const Index l = data.sample_count();
    Vector predictions(l);
    for (Index holdout = 0; holdout < l; ++holdout) {
        Dataset fold;
        fold.features.resize(l - 1, data.feature_count());
        Vector y(l - 1);
        Index r = 0;
        for (Index i = 0; i < l; ++i) {
            if (i == holdout) continue;
            fold.features.row(r) = data.features.row(i);
            y[r] = (*data.response)[i];
            ++r;
        }
        fold.response = y;
        for (Index i = 0; i < l - 1; ++i) fold.sample_ids.push_back("f" + std::to_string(i));
        fold.feature_names = data.feature_names;

        const KplsModel model = fit_model(fold, spec, nu, options.fit);
        predictions[holdout] = kpls_predict(model, Matrix(data.features.row(holdout)))[0];
    }
    return predictions;
}

// Global-scaling variant: scale once on all samples, folds reuse it.
Vector loo_oracle_global_scaling(const Dataset& data, const KernelSpec& spec, int nu) {
    const Index l = data.sample_count();
    const ScalingParams params = scale_fit(data.features);
    const Matrix scaled = scale_apply(data.features, params);

    Vector predictions(l);
    for (Index holdout = 0; holdout < l; ++holdout) {
        Matrix train(l - 1, data.feature_count());
        Vector y(l - 1);
        Index r = 0;
        for (Index i = 0; i < l; ++i) {
            if (i == holdout) continue;
            train.row(r) = scaled.row(i);
            y[r] = (*data.response)[i];
            ++r;
        }
        const KernelMatrix kernel = kernel_matrix(spec, train);
        const LatentFit fit = kpls_fit(kernel, y, nu);
        const Vector beta = compute_beta(fit.y_scores, fit.x_scores, kernel.values, y);
        const Matrix cross =
            cross_kernel_matrix(spec, Matrix(scaled.row(holdout)), train);
        predictions[holdout] = (cross * beta)(0, 0);
    }
    return predictions;
}

} // namespace

TEST_CASE("r_squared: identities and the worked example") {
    Vector y(3);
    y << 1.0, 2.0, 4.0;

    CHECK(r_squared(y, y) == 1.0);

    const Vector mean_prediction = Vector::Constant(3, y.mean());
    CHECK(r_squared(y, mean_prediction) == 0.0);

    Vector y2(2), z2(2);
    y2 << 0.0, 1.0;
    z2 << 1.0, 0.0;
    CHECK(r_squared(y2, z2) == doctest::Approx(-3.0).epsilon(1e-12));
}

TEST_CASE("r_squared: error contracts and equivariance") {
    Vector constant = Vector::Constant(4, 2.5);
    Vector z = Vector::Zero(4);
    CHECK_THROWS_AS(r_squared(constant, z), degeneracy_error);

    Vector y1(1), z1(1);
    y1 << 1.0;
    z1 << 1.0;
    CHECK_THROWS_AS(r_squared(y1, z1), config_error);

    Vector y3(3), z3(2);
    y3.setZero();
    z3.setZero();
    y3[0] = 1.0;
    CHECK_THROWS_AS(r_squared(y3, z3), data_error);

    SUBCASE("affine equivariance") {
        std::mt19937_64 rng(71);
        const Vector y = test::random_vector(rng, 12);
        const Vector pred = test::random_vector(rng, 12);
        const double base = r_squared(y, pred);
        for (double a : {2.0, -0.5}) {
            const double b = 3.25;
            const Vector ya = (y.array() * a + b).matrix();
            const Vector za = (pred.array() * a + b).matrix();
            CHECK(r_squared(ya, za) == doctest::Approx(base).epsilon(1e-10));
        }
    }

    SUBCASE("r2 is 1 only for exact equality") {
        std::mt19937_64 rng(72);
        const Vector y = test::random_vector(rng, 6);
        Vector z = y;
        z[3] += 1e-5; // large enough for the ratio to register in double
        CHECK(r_squared(y, z) < 1.0);
        CHECK(r_squared(y, y) == 1.0);
    }
}

TEST_CASE("loo_cv: noiseless linear data is recovered") {
    const Dataset data = linear_line_dataset(10);
    const CvResult result = loo_cv(data, {KernelFamily::linear, 1.0}, 1);
    REQUIRE(result.r2.has_value());
    CHECK(*result.r2 >= 0.99);
    CHECK(result.fold_failures.empty());
    CHECK_FALSE(result.eta.has_value());
}

TEST_CASE("loo_cv: permuting samples leaves r2 unchanged") {
    std::mt19937_64 rng(73);
    Dataset data = test::random_dataset(rng, 9, 3, true);
    const KernelSpec spec{KernelFamily::gaussian, 2.0};
    const CvResult base = loo_cv(data, spec, 2);

    std::vector<Index> perm{5, 2, 8, 0, 7, 4, 1, 6, 3};
    Dataset permuted = data;
    Vector y(9);
    for (Index i = 0; i < 9; ++i) {
        permuted.features.row(i) = data.features.row(perm[i]);
        y[i] = (*data.response)[perm[i]];
    }
    permuted.response = y;
    const CvResult shuffled = loo_cv(permuted, spec, 2);

    REQUIRE(base.r2.has_value());
    REQUIRE(shuffled.r2.has_value());
    CHECK(*shuffled.r2 == doctest::Approx(*base.r2).epsilon(1e-10));
    for (Index i = 0; i < 9; ++i)
        CHECK(shuffled.predictions[i] == doctest::Approx(base.predictions[perm[i]]).epsilon(1e-10));
}

TEST_CASE("loo_cv: matches the independent per-fold refit oracle") {
    for (Index l : {3, 5, 8}) {
        std::mt19937_64 rng(100 + static_cast<unsigned long>(l));
        Dataset data;
        data.features = test::random_matrix(rng, l, 1);
        data.response = test::random_vector(rng, l);
        for (Index i = 0; i < l; ++i) data.sample_ids.push_back("s" + std::to_string(i));
        data.feature_names = {"x"};

        for (KernelFamily family :
             {KernelFamily::linear, KernelFamily::gaussian, KernelFamily::exponential}) {
            for (bool centering : {false, true}) {
                const KernelSpec spec{family, 1.7};
                CvOptions options;
                options.fit.centering = centering;
                const int nu = 1;
                const CvResult result = loo_cv(data, spec, nu, options);
                const Vector oracle = loo_oracle(data, spec, nu, options);
                REQUIRE(result.fold_failures.empty());
                for (Index i = 0; i < l; ++i)
                    CHECK(result.predictions[i] == doctest::Approx(oracle[i]).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("loo_cv: thread count never changes the result") {
    std::mt19937_64 rng(82);
    const Dataset data = test::random_dataset(rng, 12, 3, true);
    const KernelSpec spec{KernelFamily::exponential, 2.1};

    CvOptions serial;
    serial.threads = 1;
    CvOptions parallel;
    parallel.threads = 4;
    const CvResult a = loo_cv(data, spec, 3, serial);
    const CvResult b = loo_cv(data, spec, 3, parallel);
    CHECK(a.predictions == b.predictions);
    REQUIRE(a.r2.has_value());
    REQUIRE(b.r2.has_value());
    CHECK(*a.r2 == *b.r2);
}

TEST_CASE("loo_cv: global fold scaling matches its own oracle") {
    std::mt19937_64 rng(74);
    Dataset data;
    data.features = test::random_matrix(rng, 6, 2);
    data.response = test::random_vector(rng, 6);
    for (Index i = 0; i < 6; ++i) data.sample_ids.push_back("s" + std::to_string(i));
    data.feature_names = {"a", "b"};

    CvOptions options;
    options.fold_scaling = FoldScaling::global;
    const KernelSpec spec{KernelFamily::gaussian, 1.3};
    const CvResult result = loo_cv(data, spec, 2, options);
    const Vector oracle = loo_oracle_global_scaling(data, spec, 2);
    REQUIRE(result.fold_failures.empty());
    for (Index i = 0; i < 6; ++i)
        CHECK(result.predictions[i] == doctest::Approx(oracle[i]).epsilon(1e-10));

    // Strict and global modes genuinely differ on the same data.
    const CvResult strict = loo_cv(data, spec, 2);
    CHECK(strict.predictions != result.predictions);
}

TEST_CASE("loo_cv: fold i never sees response i") {
    std::mt19937_64 rng(75);
    Dataset data = test::random_dataset(rng, 7, 2, true);
    const KernelSpec spec{KernelFamily::gaussian, 1.5};
    const CvResult base = loo_cv(data, spec, 2);

    Dataset tweaked = data;
    (*tweaked.response)[3] += 100.0;
    const CvResult perturbed = loo_cv(tweaked, spec, 2);
    CHECK(perturbed.predictions[3] == base.predictions[3]);
    // Other folds do see the change.
    CHECK(perturbed.predictions[0] != base.predictions[0]);
}

TEST_CASE("loo_cv: centering option runs cleanly") {
    std::mt19937_64 rng(76);
    const Dataset data = test::random_dataset(rng, 8, 2, true);
    CvOptions options;
    options.fit.centering = true;
    const CvResult result = loo_cv(data, {KernelFamily::gaussian, 1.5}, 2, options);
    CHECK(result.r2.has_value());
    CHECK(result.fold_failures.empty());
}

TEST_CASE("loo_cv: a degenerate fold is recorded, not fatal") {
    // All-zero response except the last sample: the fold holding that sample
    // out trains on an exactly-zero response and cannot extract a component.
    std::mt19937_64 rng(83);
    Dataset data = test::random_dataset(rng, 6, 2, true);
    Vector y = Vector::Zero(6);
    y[5] = 5.0;
    data.response = y;

    const CvResult result = loo_cv(data, {KernelFamily::gaussian, 1.5}, 1);
    REQUIRE(result.fold_failures.size() == 1);
    CHECK(result.fold_failures[0].sample_index == 5);
    CHECK_FALSE(result.r2.has_value());
    CHECK(std::isnan(result.predictions[5]));
    CHECK(std::isfinite(result.predictions[0]));

    SUBCASE("the search treats such configurations as infeasible") {
        SearchConfig config;
        config.nu_max = 2;
        CHECK_THROWS_AS(search_hyperparameters(data, KernelFamily::gaussian, config),
                        degeneracy_error);
    }
}

TEST_CASE("loo_cv: constant response degenerates at assembly") {
    std::mt19937_64 rng(84);
    Dataset data = test::random_dataset(rng, 6, 2, true);
    data.response = Vector::Constant(6, 3.0);
    CHECK_THROWS_AS(loo_cv(data, {KernelFamily::gaussian, 1.5}, 1), degeneracy_error);
}

TEST_CASE("loo_cv: preconditions") {
    std::mt19937_64 rng(77);
    Dataset tiny = test::random_dataset(rng, 2, 2, true);
    CHECK_THROWS_AS(loo_cv(tiny, {KernelFamily::gaussian, 1.0}, 1), config_error);

    Dataset no_response = test::random_dataset(rng, 5, 2, false);
    CHECK_THROWS_AS(loo_cv(no_response, {KernelFamily::gaussian, 1.0}, 1), data_error);

    Dataset fine = test::random_dataset(rng, 5, 2, true);
    CHECK_THROWS_AS(loo_cv(fine, {KernelFamily::gaussian, 1.0}, 5), config_error);
}

TEST_CASE("nelder_mead_1d: recovers the known minimum of a quadratic in eta") {
    // Synthetic objective substituted for the cross-validation path: the
    // production eta search minimizes f over log eta with the simplex width
    // measured in eta units; the minimum sits at eta = 3.
    const double log3 = std::log(3.0);
    int evaluations = 0;
    auto objective = [&](double log_eta) {
        ++evaluations;
        return (log_eta - log3) * (log_eta - log3);
    };

    SimplexOptions options;
    options.tolerance = 1e-3;
    options.max_evaluations = 60;
    const SimplexResult result =
        nelder_mead_1d(objective, std::log(1.0), 0.5, options,
                       [](double a, double b) { return std::abs(std::exp(a) - std::exp(b)); });

    CHECK(std::abs(std::exp(result.x) - 3.0) <= 1e-3);
    CHECK(result.evaluations == evaluations);
    CHECK(result.evaluations <= 60);
}

TEST_CASE("nelder_mead_1d: a budget of one returns the initial point") {
    SimplexOptions options;
    options.max_evaluations = 1;
    const SimplexResult result =
        nelder_mead_1d([](double x) { return x * x; }, 5.0, 0.5, options);
    CHECK(result.x == 5.0);
    CHECK(result.value == 25.0);
    CHECK(result.evaluations == 1);
}

TEST_CASE("optimize_eta: rejects the linear kernel") {
    std::mt19937_64 rng(78);
    const Dataset data = test::random_dataset(rng, 6, 2, true);
    CHECK_THROWS_AS(optimize_eta(data, KernelFamily::linear, 1, SearchConfig{}), config_error);
}

TEST_CASE("optimize_eta: a budget of one evaluates only the initial width") {
    const Dataset data = linear_line_dataset(10);
    SearchConfig config;
    config.eta_init = 2.5;
    config.max_simplex_evals = 1;
    const EtaSearchResult result = optimize_eta(data, KernelFamily::gaussian, 2, config);
    CHECK(result.eta == 2.5);
    CHECK(result.evaluations == 1);

    const CvResult at_init = loo_cv(data, {KernelFamily::gaussian, 2.5}, 2);
    REQUIRE(at_init.r2.has_value());
    CHECK(result.r2 == *at_init.r2);
}

TEST_CASE("optimize_eta: improves on the initial width") {
    const Dataset data = linear_line_dataset(12);
    SearchConfig config;
    config.max_simplex_evals = 40;
    const EtaSearchResult result = optimize_eta(data, KernelFamily::gaussian, 2, config);
    CHECK(result.eta > 0.0);
    CHECK(result.r2 <= 1.0);
    CHECK(result.evaluations <= 40);

    const CvResult at_init = loo_cv(data, {KernelFamily::gaussian,
                                           LooEvaluator(data, KernelFamily::gaussian)
                                               .median_pairwise_distance()},
                                    2);
    REQUIRE(at_init.r2.has_value());
    CHECK(result.r2 >= *at_init.r2);
}

TEST_CASE("search_hyperparameters: linear grid has no eta") {
    const Dataset data = linear_line_dataset(10);
    SearchConfig config;
    config.nu_max = 4;
    const SearchResult result = search_hyperparameters(data, KernelFamily::linear, config);
    CHECK_FALSE(result.eta.has_value());
    REQUIRE(result.cv.r2.has_value());
    CHECK(*result.cv.r2 >= 0.99);
}

TEST_CASE("search_hyperparameters: recovers the latent count of rank-2 data") {
    std::mt19937_64 rng(79);
    const Index l = 24, p = 6;
    // Exactly rank-2 feature matrix, response linear in it plus small noise.
    const Matrix basis = test::random_matrix(rng, l, 2);
    const Matrix loadings = test::random_matrix(rng, 2, p);
    Dataset data;
    data.features = basis * loadings;
    const Vector w = test::random_vector(rng, p);
    Vector y = data.features * w;
    const double sd = std::sqrt((y.array() - y.mean()).square().sum() / static_cast<double>(l));
    std::normal_distribution<double> noise(0.0, 0.01 * sd);
    for (Index i = 0; i < l; ++i) y[i] += noise(rng);
    data.response = y;
    for (Index i = 0; i < l; ++i) data.sample_ids.push_back("s" + std::to_string(i));
    for (Index j = 0; j < p; ++j) data.feature_names.push_back("f" + std::to_string(j));

    SearchConfig config;
    config.nu_max = 6;
    const SearchResult result = search_hyperparameters(data, KernelFamily::linear, config);
    CHECK(result.nu >= 2);
    CHECK(result.nu <= 3);
}

TEST_CASE("search_hyperparameters: deterministic and self-consistent") {
    std::mt19937_64 rng(80);
    Dataset data = test::random_dataset(rng, 10, 3, true);
    // Give the response some structure so the search has a real optimum.
    data.response = Vector((data.features.col(0).array().sin() +
                            0.5 * data.features.col(1).array()).matrix());

    SearchConfig config;
    config.nu_max = 4;
    config.max_simplex_evals = 25;
    const SearchResult first = search_hyperparameters(data, KernelFamily::gaussian, config);
    const SearchResult second = search_hyperparameters(data, KernelFamily::gaussian, config);

    CHECK(first.nu == second.nu);
    REQUIRE(first.eta.has_value());
    REQUIRE(second.eta.has_value());
    CHECK(*first.eta == *second.eta);
    REQUIRE(first.cv.r2.has_value());
    CHECK(*first.cv.r2 == *second.cv.r2);

    SUBCASE("reported r2 equals a fresh loo_cv at the returned parameters") {
        const CvResult recheck = loo_cv(data, {KernelFamily::gaussian, *first.eta}, first.nu);
        REQUIRE(recheck.r2.has_value());
        CHECK(std::abs(*recheck.r2 - *first.cv.r2) <= 1e-12);
    }
}

TEST_CASE("search_hyperparameters: an empty feasible grid is a search failure") {
    std::mt19937_64 rng(81);
    const Dataset data = test::random_dataset(rng, 5, 2, true);
    SearchConfig config;
    config.nu_min = 10; // beyond l-1 after clamping
    config.nu_max = 12;
    CHECK_THROWS_AS(search_hyperparameters(data, KernelFamily::linear, config), degeneracy_error);
}

TEST_CASE("SearchConfig validation") {
    SearchConfig config;
    config.nu_min = 3;
    config.nu_max = 2;
    CHECK_THROWS_AS(config.validate(), config_error);

    config = SearchConfig{};
    config.eta_init = 1e-20; // outside bounds
    CHECK_THROWS_AS(config.validate(), config_error);

    config = SearchConfig{};
    config.simplex_tolerance = 0.0;
    CHECK_THROWS_AS(config.validate(), config_error);
}
