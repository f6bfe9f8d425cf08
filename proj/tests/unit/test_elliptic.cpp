#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "angio/elliptic.hpp"
#include "angio/errors.hpp"
#include "angio/functionals.hpp"
#include "support.hpp"

using namespace angio;
using angio::testing::kPi;

TEST(SolveW, ConstantSourceGivesZero)
{
    const Grid g = build_grid(2, {1.0, 1.0}, {8, 8});
    const Field w = solve_w(Field(g, 2.0));
    EXPECT_EQ(w.max_abs(), 0.0);
}

TEST(SolveW, CosineOracle)
{
    const Grid g = build_grid(1, {1.0}, {256});
    const Field u = Field::sample(g, [](double x) { return 1.0 + std::cos(kPi * x); });
    const EllipticSolution s = solve_w_detailed(u, {});
    const Field exact = Field::sample(g, [](double x) { return std::cos(kPi * x) / (kPi * kPi); });
    EXPECT_NEAR(exact.max_abs(), 0.101321, 1e-5);
    EXPECT_LE((s.w - exact).max_abs() / exact.max_abs(), 1e-3);
    EXPECT_LE(std::abs(integrate(s.w)), 1e-12 * g.measure() * s.w.max_abs());
    EXPECT_LE(s.residual, 1e-10);
    EXPECT_LE(elliptic_residual(s.w, u), 1e-10);
}

TEST(SolveW, RandomSourceResidualAndMean)
{
    std::mt19937_64 rng(7);
    for (const Grid& g : {build_grid(1, {1.0}, {128}), build_grid(2, {1.0, 2.0}, {32, 48})}) {
        const Field u = angio::testing::random_field(g, rng, 0.1, 3.0);
        const EllipticSolution s = solve_w_detailed(u, {});
        EXPECT_LE(s.residual, 1e-10);
        EXPECT_LE(std::abs(integrate(s.w)), 1e-12 * g.measure() * s.w.max_abs());
    }
}

TEST(SolveW, MatchesDensePseudoInverse)
{
    std::mt19937_64 rng(8);
    for (const Grid& g : {build_grid(1, {2.0}, {20}), build_grid(2, {1.0, 1.5}, {8, 6})}) {
        const Field u = angio::testing::random_field(g, rng, 0.5, 2.0);
        const Field w = solve_w(u);
        const Eigen::MatrixXd a = -angio::testing::dense_laplacian(g);
        const Eigen::VectorXd f = angio::testing::to_eigen(u - mean(u));
        const Eigen::VectorXd ref = a.completeOrthogonalDecomposition().pseudoInverse() * f;
        for (std::size_t i = 0; i < w.size(); ++i) {
            EXPECT_NEAR(w[i], ref(static_cast<Eigen::Index>(i)), 1e-8 * ref.cwiseAbs().maxCoeff());
        }
    }
}

TEST(SolveW, NearlyConstantSourceStillConverges)
{
    const Grid g = build_grid(1, {1.0}, {128});
    for (double eps : {1e-6, 1e-9, 1e-12}) {
        const Field u = Field::sample(g, [&](double x) { return 1.0 + eps * std::cos(kPi * x); });
        EXPECT_NO_THROW(solve_w(u)) << eps;
    }
}

TEST(SolveW, Linearity)
{
    std::mt19937_64 rng(9);
    const Grid g = build_grid(2, {1.0, 1.0}, {16, 16});
    const Field u1 = angio::testing::random_field(g, rng);
    const Field u2 = angio::testing::random_field(g, rng);
    const double alpha = 0.7, beta = -1.3;
    const Field lhs = solve_w(alpha * u1 + beta * u2);
    const Field rhs = alpha * solve_w(u1) + beta * solve_w(u2);
    EXPECT_LE((lhs - rhs).max_abs(), 1e-8 * rhs.max_abs());
}

TEST(SolveW, ErrorsCarryResidual)
{
    const Grid g = build_grid(1, {1.0}, {64});
    const Field u = Field::sample(g, [](double x) { return 1.0 + std::cos(3 * kPi * x) + x; });
    EllipticConfig cfg;
    cfg.max_iterations = 1;
    try {
        solve_w(u, cfg);
        FAIL() << "expected ConvergenceError";
    } catch (const ConvergenceError& e) {
        EXPECT_GT(e.residual(), cfg.tolerance);
        EXPECT_GE(e.iterations(), 1);
    }
    cfg = {};
    cfg.tolerance = 1e-3;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    Field bad(g, 1.0);
    bad[3] = std::nan("");
    EXPECT_THROW(solve_w(bad), InvalidArgument);
}

TEST(SpectralInfo, IntervalMatchesPiSquared)
{
    const SpectralInfo s = spectral_info(build_grid(1, {1.0}, {256}));
    EXPECT_LE(std::abs(s.lambda1 - kPi * kPi) / (kPi * kPi), 1e-3);
    EXPECT_NEAR(s.poincare_cp, 1.0 / std::sqrt(s.lambda1), 1e-15);
    EXPECT_NEAR(s.poincare_cp, 1.0 / kPi, 1e-4);
}

TEST(SpectralInfo, RectangleAndDegenerateSquare)
{
    const SpectralInfo rect = spectral_info(build_grid(2, {1.0, 2.0}, {16, 32}));
    EXPECT_NEAR(rect.lambda1, kPi * kPi / 4.0, 1e-2);
    const SpectralInfo sq = spectral_info(build_grid(2, {1.0, 1.0}, {24, 24}));
    EXPECT_NEAR(sq.lambda1, kPi * kPi, 2e-2);
}

TEST(SpectralInfo, MatchesDenseEigenvalues)
{
    for (const Grid& g : {build_grid(1, {1.3}, {30}), build_grid(2, {1.0, 2.0}, {8, 12}),
                          build_grid(2, {1.0, 1.0}, {10, 10})}) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-angio::testing::dense_laplacian(g));
        const double expected = es.eigenvalues()(1);  // (0) is the constant mode
        const SpectralInfo s = spectral_info(g);
        EXPECT_NEAR(s.lambda1, expected, 1e-9 * expected);
    }
}

TEST(Poincare, RandomZeroMeanFields)
{
    std::mt19937_64 rng(10);
    for (const Grid& g : {build_grid(1, {1.0}, {128}), build_grid(2, {1.0, 2.0}, {16, 32})}) {
        const SpectralInfo s = spectral_info(g);
        const double slack = s.poincare_cp + 3.0 * g.max_spacing();
        for (int k = 0; k < 500; ++k) {
            Field f = angio::testing::random_field(g, rng);
            // mix in a smooth low mode so some fields come close to the extremal one
            const double c = std::normal_distribution<double>(0, 5)(rng);
            f += c * Field::sample(g, [&](double x, double) { return std::cos(kPi * x / g.length(0)); });
            f -= mean(f);
            EXPECT_LE(lp_norm(f, 2.0), slack * grad_l2(f));
        }
    }
}

TEST(Poincare, GradientAndLaplacianOfWBoundedByDeviation)
{
    std::mt19937_64 rng(12);
    const Grid g = build_grid(1, {1.0}, {128});
    const SpectralInfo s = spectral_info(g);
    for (int k = 0; k < 50; ++k) {
        const Field u = angio::testing::random_field(g, rng, 0.0, 2.0);
        const Field w = solve_w(u);
        for (double b : {mean(u), 1.0}) {
            const double dev = lp_norm(u - b, 2.0);
            EXPECT_LE(grad_l2(w), (s.poincare_cp + 3 * g.spacing(0)) * dev);
            EXPECT_LE(lp_norm(laplacian(w), 2.0), dev * (1 + 1e-9));
        }
    }
}
