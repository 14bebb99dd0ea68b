#include "kpls/model_io.hpp"
#include "kpls/errors.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace kpls;

namespace {

KplsModel fitted_example(std::uint64_t seed, bool centering = false) {
    std::mt19937_64 rng(seed);
    const Dataset data = test::random_dataset(rng, 8, 3, true);
    FitOptions options;
    options.centering = centering;
    return fit_model(data, {KernelFamily::gaussian, 2.5}, centering ? 6 : 5, options);
}

bool models_identical(const KplsModel& a, const KplsModel& b) {
    return a.kernel.family == b.kernel.family && a.kernel.eta == b.kernel.eta &&
           a.scale_mode == b.scale_mode && a.scaling.medians == b.scaling.medians &&
           a.scaling.deviations == b.scaling.deviations &&
           a.scaling.degenerate_mask == b.scaling.degenerate_mask &&
           a.train_features == b.train_features && a.x_scores == b.x_scores &&
           a.y_scores == b.y_scores && a.coefficients == b.coefficients &&
           a.latent_count == b.latent_count && a.early_stopped == b.early_stopped &&
           a.centering == b.centering && a.response_mean == b.response_mean &&
           a.feature_names == b.feature_names;
}

} // namespace

TEST_CASE("model round-trips bit-exactly through the text document") {
    test::TempDir dir;
    for (bool centering : {false, true}) {
        const KplsModel model = fitted_example(61, centering);
        const std::string path = dir.file(centering ? "c.json" : "p.json");
        save_model(model, path);
        const KplsModel loaded = load_model(path);
        CHECK(models_identical(model, loaded));
        if (centering) {
            CHECK(loaded.kernel_centering.train_column_means ==
                  model.kernel_centering.train_column_means);
            CHECK(loaded.kernel_centering.grand_mean == model.kernel_centering.grand_mean);
        }

        std::mt19937_64 rng(62);
        const Matrix probes = test::random_matrix(rng, 4, 3);
        CHECK(kpls_predict(model, probes) == kpls_predict(loaded, probes));
    }
}

TEST_CASE("awkward doubles survive the round trip") {
    KplsModel model = fitted_example(63);
    model.coefficients[0] = 5e-324;                  // smallest denormal
    model.coefficients[1] = -0.0;
    model.coefficients[2] = 1e300;
    model.coefficients[3] = -2.2250738585072014e-308; // smallest normal
    model.coefficients[4] = 0.1;
    model.response_mean = 1.0 / 3.0;

    std::stringstream stream;
    save_model(model, stream);
    const KplsModel loaded = load_model(stream);

    for (Index i = 0; i < model.coefficients.size(); ++i)
        CHECK(loaded.coefficients[i] == model.coefficients[i]);
    CHECK(std::signbit(loaded.coefficients[1]));
    CHECK(loaded.response_mean == model.response_mean);
}

TEST_CASE("serialization is byte-deterministic") {
    const KplsModel model = fitted_example(64);
    std::stringstream first, second;
    save_model(model, first);
    save_model(model, second);
    CHECK(first.str() == second.str());
}

TEST_CASE("malformed model files are rejected") {
    std::stringstream not_json("this is not json");
    CHECK_THROWS_AS(load_model(not_json), data_error);

    std::stringstream wrong_tag(R"({"format":"something-else"})");
    CHECK_THROWS_AS(load_model(wrong_tag), data_error);

    std::stringstream missing_fields(R"({"format":"kpls-model-v1"})");
    CHECK_THROWS_AS(load_model(missing_fields), data_error);

    CHECK_THROWS_AS(load_model(std::string("/nonexistent/model.json")), data_error);
}
