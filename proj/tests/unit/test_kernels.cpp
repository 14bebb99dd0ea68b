#include "kpls/kernels.hpp"
#include "kpls/errors.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace kpls;

TEST_CASE("kernel_eval: worked values") {
    Vector x2(2), y2(2);

    SUBCASE("gaussian at zero distance is exactly 1") {
        x2 << 0.3, -1.2;
        CHECK(kernel_eval({KernelFamily::gaussian, 0.7}, x2, x2) == 1.0);
    }

    SUBCASE("gaussian exp(-1)") {
        x2 << 0.0, 0.0;
        y2 << 2.0, 0.0;
        const double value = kernel_eval({KernelFamily::gaussian, std::sqrt(2.0)}, x2, y2);
        CHECK(value == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    }

    SUBCASE("exponential exp(-1)") {
        Vector x1(1), y1(1);
        x1 << 0.0;
        y1 << 2.0;
        const double value = kernel_eval({KernelFamily::exponential, 1.0}, x1, y1);
        CHECK(value == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    }

    SUBCASE("linear dot product") {
        x2 << 1.0, 2.0;
        y2 << 3.0, 4.0;
        CHECK(kernel_eval({KernelFamily::linear, 1.0}, x2, y2) == 11.0);
    }
}

TEST_CASE("kernel_eval: error contracts") {
    Vector x(2), y(3);
    x.setZero();
    y.setZero();
    CHECK_THROWS_AS(kernel_eval({KernelFamily::gaussian, 1.0}, x, y), data_error);

    Vector bad(2);
    bad << 1.0, std::numeric_limits<double>::quiet_NaN();
    Vector ok(2);
    ok.setZero();
    CHECK_THROWS_AS(kernel_eval({KernelFamily::gaussian, 1.0}, bad, ok), data_error);

    CHECK_THROWS_AS(kernel_eval({KernelFamily::gaussian, 0.0}, ok, ok), config_error);
    CHECK_THROWS_AS(kernel_eval({KernelFamily::exponential, -1.0}, ok, ok), config_error);
}

TEST_CASE("kernel_matrix: diagonal, duplicates, brute-force oracle") {
    std::mt19937_64 rng(31);

    SUBCASE("gaussian diagonal is all ones") {
        const Matrix x = test::random_matrix(rng, 6, 4);
        const KernelMatrix k = kernel_matrix({KernelFamily::gaussian, 1.3}, x);
        CHECK(k.values.diagonal().isConstant(1.0, 0.0));
    }

    SUBCASE("two identical rows give an all-equal matrix") {
        Matrix x(2, 3);
        x.row(0) << 1.0, 2.0, 3.0;
        x.row(1) = x.row(0);
        const KernelMatrix k = kernel_matrix({KernelFamily::gaussian, 2.0}, x);
        CHECK(k.values(0, 0) == k.values(0, 1));
        CHECK(k.values(0, 1) == k.values(1, 0));
        CHECK(k.values(1, 1) == 1.0);
    }

    SUBCASE("entries equal the pairwise double loop") {
        // kernel_eval copies rows into dense vectors, which can reassociate
        // the reduction by one ulp relative to the strided matrix path.
        for (KernelFamily family :
             {KernelFamily::linear, KernelFamily::gaussian, KernelFamily::exponential}) {
            const Matrix x = test::random_matrix(rng, 3, 5);
            const KernelSpec spec{family, 0.9};
            const KernelMatrix k = kernel_matrix(spec, x);
            for (Index i = 0; i < 3; ++i)
                for (Index j = 0; j < 3; ++j)
                    CHECK(k.values(i, j) ==
                          doctest::Approx(kernel_eval(spec, x.row(i), x.row(j))).epsilon(1e-14));
        }
    }

    SUBCASE("symmetry is exact") {
        const Matrix x = test::random_matrix(rng, 8, 3);
        const KernelMatrix k = kernel_matrix({KernelFamily::exponential, 0.6}, x);
        CHECK(k.values == k.values.transpose().eval());
    }
}

TEST_CASE("cross_kernel_matrix: consistency and brute force") {
    std::mt19937_64 rng(32);
    const KernelSpec spec{KernelFamily::gaussian, 1.1};

    SUBCASE("same sample set reproduces kernel_matrix") {
        const Matrix x = test::random_matrix(rng, 5, 3);
        CHECK(cross_kernel_matrix(spec, x, x) == kernel_matrix(spec, x).values);
    }

    SUBCASE("a duplicated training sample scores 1") {
        const Matrix train = test::random_matrix(rng, 4, 3);
        const Matrix probe = train.row(2);
        const Matrix cross = cross_kernel_matrix(spec, probe, train);
        CHECK(cross(0, 2) == 1.0);
    }

    SUBCASE("2x3 against 4x3 matches the double loop") {
        const Matrix a = test::random_matrix(rng, 2, 3);
        const Matrix b = test::random_matrix(rng, 4, 3);
        const Matrix cross = cross_kernel_matrix(spec, a, b);
        REQUIRE(cross.rows() == 2);
        REQUIRE(cross.cols() == 4);
        for (Index i = 0; i < 2; ++i)
            for (Index j = 0; j < 4; ++j)
                CHECK(cross(i, j) ==
                      doctest::Approx(kernel_eval(spec, a.row(i), b.row(j))).epsilon(1e-14));
    }

    SUBCASE("column mismatch is an error") {
        const Matrix a = test::random_matrix(rng, 2, 3);
        const Matrix b = test::random_matrix(rng, 2, 4);
        CHECK_THROWS_AS(cross_kernel_matrix(spec, a, b), data_error);
    }
}

TEST_CASE("center_kernel: projector identities") {
    SUBCASE("all-ones kernel centers to zero") {
        KernelMatrix k;
        k.spec = {KernelFamily::gaussian, 1.0};
        k.values = Matrix::Ones(4, 4);
        const CenteredKernel centered = center_kernel(k);
        CHECK(centered.kernel.values.cwiseAbs().maxCoeff() < 1e-15);
    }

    SUBCASE("an already-centered kernel is unchanged") {
        std::mt19937_64 rng(33);
        KernelMatrix k;
        k.spec = {KernelFamily::gaussian, 1.0};
        const Matrix a = test::random_matrix(rng, 5, 5);
        k.values = a + a.transpose();
        const Matrix once = center_kernel(k).kernel.values;
        KernelMatrix again{once, k.spec};
        CHECK((center_kernel(again).kernel.values - once).cwiseAbs().maxCoeff() < 1e-10);
    }

    SUBCASE("row sums of the centered kernel vanish") {
        std::mt19937_64 rng(34);
        const Matrix a = test::random_matrix(rng, 4, 4);
        KernelMatrix k{a + a.transpose(), {KernelFamily::gaussian, 1.0}};
        const Matrix centered = center_kernel(k).kernel.values;
        CHECK(centered.rowwise().sum().cwiseAbs().maxCoeff() < 1e-10);
        CHECK(centered.colwise().sum().cwiseAbs().maxCoeff() < 1e-10);
    }

    SUBCASE("cross centering agrees with centering rows of the square kernel") {
        std::mt19937_64 rng(35);
        const Matrix x = test::random_matrix(rng, 6, 3);
        const KernelSpec spec{KernelFamily::gaussian, 1.4};
        const KernelMatrix k = kernel_matrix(spec, x);
        const CenteredKernel centered = center_kernel(k);
        // Rows of K are cross-kernel rows of the training set against itself.
        const Matrix cross_centered = center_cross_kernel(k.values, centered.centering);
        CHECK((cross_centered - centered.kernel.values).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("kernel properties") {
    std::mt19937_64 rng(36);

    SUBCASE("gaussian/exponential values lie in (0, 1], 1 iff equal") {
        const Matrix x = test::random_matrix(rng, 10, 4);
        for (KernelFamily family : {KernelFamily::gaussian, KernelFamily::exponential}) {
            const KernelSpec spec{family, 0.8};
            for (Index i = 0; i < 10; ++i) {
                for (Index j = 0; j < 10; ++j) {
                    const double value = kernel_eval(spec, x.row(i), x.row(j));
                    CHECK(value > 0.0);
                    CHECK(value <= 1.0);
                    CHECK((value == 1.0) == (i == j));
                }
            }
        }
    }

    SUBCASE("gaussian kernel matrices are positive semidefinite") {
        for (int trial = 0; trial < 5; ++trial) {
            const Index n = 5 + static_cast<Index>(rng() % 16); // up to 20 vectors
            const Matrix x = test::random_matrix(rng, n, 6);
            const KernelMatrix k = kernel_matrix({KernelFamily::gaussian, 1.2}, x);
            Eigen::SelfAdjointEigenSolver<Matrix> eigen(k.values);
            CHECK(eigen.eigenvalues().minCoeff() >= -1e-8);
        }
    }

    SUBCASE("gaussian value strictly increases with eta for distinct points") {
        Vector x(3), y(3);
        x << 0.1, 0.2, 0.3;
        y << 1.0, -0.5, 0.4;
        double previous = 0.0;
        for (double eta : {0.3, 0.6, 1.2, 2.4, 4.8}) {
            const double value = kernel_eval({KernelFamily::gaussian, eta}, x, y);
            CHECK(value > previous);
            previous = value;
        }
    }

    SUBCASE("linear kernel matrix equals X X^T") {
        const Matrix x = test::random_matrix(rng, 7, 4);
        const KernelMatrix k = kernel_matrix({KernelFamily::linear, 1.0}, x);
        const Matrix gram = x * x.transpose();
        CHECK((k.values - gram).cwiseAbs().maxCoeff() < 1e-12);
    }
}
