#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "angio/errors.hpp"
#include "angio/grid.hpp"
#include "support.hpp"

using namespace angio;
using angio::testing::kPi;

TEST(Grid, SpacingAndMeasure)
{
    const Grid g1 = build_grid(1, {1.0}, {8});
    EXPECT_DOUBLE_EQ(g1.spacing(0), 0.125);
    EXPECT_DOUBLE_EQ(g1.measure(), 1.0);
    EXPECT_EQ(g1.size(), 8u);

    const Grid g2 = build_grid(2, {1.0, 2.0}, {4, 8});
    EXPECT_DOUBLE_EQ(g2.spacing(0), 0.25);
    EXPECT_DOUBLE_EQ(g2.spacing(1), 0.25);
    EXPECT_DOUBLE_EQ(g2.measure(), 2.0);
    EXPECT_DOUBLE_EQ(g2.cell_volume(), 0.0625);
    EXPECT_TRUE(g2.convex());
    EXPECT_FALSE(g2.with_convex_flag(false).convex());
}

TEST(Grid, RejectsBadInput)
{
    EXPECT_THROW(build_grid(3, {1, 1, 1}, {4, 4, 4}), InvalidArgument);
    EXPECT_THROW(build_grid(1, {0.0}, {8}), InvalidArgument);
    EXPECT_THROW(build_grid(1, {-1.0}, {8}), InvalidArgument);
    EXPECT_THROW(build_grid(1, {1.0}, {3}), InvalidArgument);
    EXPECT_THROW(build_grid(2, {1.0}, {8, 8}), InvalidArgument);
}

TEST(Grid, RowMajorIndexing)
{
    const Grid g = build_grid(2, {1.0, 1.0}, {5, 7});
    EXPECT_EQ(g.index(2, 3), 2u * 7u + 3u);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const auto [i, j] = g.coords(k);
        EXPECT_EQ(g.index(i, j), k);
    }
    const Field f = Field::sample(g, [](double x, double y) { return 10 * x + y; });
    EXPECT_DOUBLE_EQ(f[g.index(1, 2)], 10 * g.center(0, 1) + g.center(1, 2));
}

TEST(Grid, FieldSizeMismatchThrows)
{
    const Grid g = build_grid(1, {1.0}, {8});
    EXPECT_THROW(Field(g, std::vector<double>(7, 1.0)), InvalidArgument);
}

TEST(Laplacian, ConstantIsHarmonic)
{
    const Grid g = build_grid(2, {1.0, 2.0}, {6, 9});
    const Field lap = laplacian(Field(g, 3.5));
    EXPECT_EQ(lap.max_abs(), 0.0);
}

TEST(Laplacian, DiscreteNeumannEigenvector)
{
    // cos(k pi x / L) at cell centers is an exact eigenvector of the mirrored stencil
    // with eigenvalue -(4/h^2) sin^2(k pi h / (2L)).
    for (int k : {1, 2, 5}) {
        const double L = 1.7;
        const Grid g = build_grid(1, {L}, {40});
        const double h = g.spacing(0);
        const Field f = Field::sample(g, [&](double x) { return std::cos(k * kPi * x / L); });
        const double lambda = 4.0 / (h * h) * std::pow(std::sin(k * kPi * h / (2 * L)), 2);
        const Field lap = laplacian(f);
        for (std::size_t i = 0; i < f.size(); ++i) {
            EXPECT_NEAR(lap[i], -lambda * f[i], 1e-10 * lambda);
        }
    }
    const Grid g2 = build_grid(2, {1.0, 2.0}, {12, 10});
    const Field f2 = Field::sample(g2, [](double x, double y) { return std::cos(kPi * x) * std::cos(2 * kPi * y / 2.0); });
    const double hx = g2.spacing(0), hy = g2.spacing(1);
    const double lambda = 4 / (hx * hx) * std::pow(std::sin(kPi * hx / 2), 2) +
                          4 / (hy * hy) * std::pow(std::sin(2 * kPi * hy / 4), 2);
    const Field lap2 = laplacian(f2);
    for (std::size_t i = 0; i < f2.size(); ++i) {
        EXPECT_NEAR(lap2[i], -lambda * f2[i], 1e-10 * lambda);
    }
}

TEST(Laplacian, CosineMatchesContinuumAtN256)
{
    const Grid g = build_grid(1, {1.0}, {256});
    const Field f = Field::sample(g, [](double x) { return std::cos(kPi * x); });
    const Field lap = laplacian(f);
    double err = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        err = std::max(err, std::abs(lap[i] + kPi * kPi * f[i]));
    }
    EXPECT_LE(err / (kPi * kPi), 1e-3);
}

TEST(Laplacian, MatchesDenseStencilMatrix)
{
    std::mt19937_64 rng(3);
    for (const Grid& g : {build_grid(1, {2.0}, {9}), build_grid(2, {1.0, 3.0}, {5, 7})}) {
        const Field f = angio::testing::random_field(g, rng);
        const Eigen::VectorXd expected = angio::testing::dense_laplacian(g) * angio::testing::to_eigen(f);
        const Field lap = laplacian(f);
        for (std::size_t i = 0; i < f.size(); ++i) {
            EXPECT_NEAR(lap[i], expected(static_cast<Eigen::Index>(i)), 1e-10 * expected.cwiseAbs().maxCoeff());
        }
    }
}

TEST(Laplacian, DivergenceTheoremSymmetryAndSign)
{
    std::mt19937_64 rng(11);
    for (const Grid& g : {build_grid(1, {1.0}, {64}), build_grid(2, {1.0, 2.0}, {16, 24})}) {
        for (int trial = 0; trial < 20; ++trial) {
            const Field f = angio::testing::random_field(g, rng);
            const Field h = angio::testing::random_field(g, rng);
            const Field lf = laplacian(f);
            EXPECT_LE(std::abs(integrate(lf)), 1e-12 * static_cast<double>(g.size()) * f.max_abs());
            const double scale = lf.max_abs() * h.max_abs() * g.measure();
            EXPECT_NEAR(inner(lf, h), inner(f, laplacian(h)), 1e-12 * scale);
            EXPECT_LE(inner(lf, f), 0.0);
        }
    }
}

TEST(Laplacian, SecondOrderRefinement)
{
    // Non-eigen smooth Neumann-compatible field: f = cos(pi x) + 0.5 cos(2 pi x)^2.
    auto f = [](double x) { return std::cos(kPi * x) + 0.5 * std::pow(std::cos(2 * kPi * x), 2); };
    auto lap_exact = [](double x) {
        return -kPi * kPi * std::cos(kPi * x) - 4 * kPi * kPi * std::cos(4 * kPi * x);
    };
    double prev = 0.0;
    for (int n : {32, 64, 128, 256}) {
        const Grid g = build_grid(1, {1.0}, {n});
        const Field lap = laplacian(Field::sample(g, f));
        double err = 0.0;
        for (int i = 0; i < n; ++i) {
            err = std::max(err, std::abs(lap[static_cast<std::size_t>(i)] - lap_exact(g.center(0, i))));
        }
        if (prev > 0.0) {
            const double ratio = prev / err;
            EXPECT_GE(ratio, 3.4);
            EXPECT_LE(ratio, 4.6);
        }
        prev = err;
    }
}

TEST(Gradient, LinearAndCosine)
{
    const Grid g = build_grid(1, {1.0}, {16});
    const FaceFlux lin = gradient_faces(Field::sample(g, [](double x) { return x; }));
    ASSERT_EQ(lin.axis[0].size(), g.face_count(0));
    for (double v : lin.axis[0]) EXPECT_NEAR(v, 1.0, 1e-12);

    const FaceFlux zero = gradient_faces(Field(g, 2.0));
    for (double v : zero.axis[0]) EXPECT_EQ(v, 0.0);

    const Grid fine = build_grid(1, {1.0}, {256});
    const FaceFlux grad = gradient_faces(Field::sample(fine, [](double x) { return std::cos(kPi * x); }));
    const double h = fine.spacing(0);
    for (std::size_t i = 0; i < grad.axis[0].size(); ++i) {
        const double xf = (static_cast<double>(i) + 1.0) * h;
        EXPECT_NEAR(grad.axis[0][i], -kPi * std::sin(kPi * xf), kPi * kPi * kPi * h * h / 24 * 1.01);
    }
}

TEST(Divergence, ComposesToLaplacianAndTelescopes)
{
    std::mt19937_64 rng(5);
    for (const Grid& g : {build_grid(1, {1.0}, {33}), build_grid(2, {2.0, 1.0}, {12, 8})}) {
        const Field f = angio::testing::random_field(g, rng);
        const Field a = divergence(gradient_faces(f));
        const Field b = laplacian(f);
        for (std::size_t i = 0; i < f.size(); ++i) {
            EXPECT_NEAR(a[i], b[i], 1e-14 * b.max_abs());
        }
        FaceFlux flux(g);
        std::uniform_real_distribution<double> d(-5, 5);
        for (auto& ax : flux.axis)
            for (double& v : ax) v = d(rng);
        EXPECT_LE(std::abs(integrate(divergence(flux))), 1e-12 * 5.0 * g.measure());
        EXPECT_EQ(divergence(FaceFlux(g)).max_abs(), 0.0);
    }
}

TEST(Quadrature, IntegrateMeanAndNorms)
{
    const Grid g = build_grid(1, {1.0}, {128});
    EXPECT_DOUBLE_EQ(integrate(Field(g, 2.5)), 2.5);
    EXPECT_NEAR(integrate(Field::sample(g, [](double x) { return std::cos(kPi * x); })), 0.0, 1e-12);
    EXPECT_NEAR(integrate(Field::sample(g, [](double x) { return x * x; })), 1.0 / 3.0, 1e-4);
    EXPECT_NEAR(mean(Field::sample(g, [](double x) { return 1 + x; })), 1.5, 1e-6);

    const Grid g2 = build_grid(2, {1.0, 3.0}, {4, 6});
    EXPECT_NEAR(integrate(Field(g2, 2.0)), 6.0, 1e-14);
    EXPECT_NEAR(mean(Field(g2, 2.0)), 2.0, 1e-14);

    EXPECT_NEAR(lp_norm(Field(g, 2.0), 2.0), 2.0, 1e-14);
    EXPECT_NEAR(lp_norm(Field::sample(g, [](double x) { return std::sin(kPi * x); }), 2.0), 1.0 / std::sqrt(2.0),
                1e-4);
    const Grid g4 = build_grid(1, {1.0}, {4});
    EXPECT_EQ(lp_norm(Field(g4, std::vector<double>{-3, 1, 2, 0}), kInfinityNorm), 3.0);
    EXPECT_THROW(lp_norm(Field(g4, 1.0), 0.5), InvalidArgument);
    // constant c on a measure-2 domain: c * 2^{1/p}
    EXPECT_NEAR(lp_norm(Field(build_grid(1, {2.0}, {8}), 3.0), 3.0), 3.0 * std::cbrt(2.0), 1e-13);
}

TEST(FieldCsv, HeaderRowsAndRoundTrip)
{
    const Grid g = build_grid(2, {1.0, 0.5}, {4, 4});
    const Field f = Field::sample(g, [](double x, double y) { return std::exp(x) / 3.0 + y; });
    std::ostringstream os;
    write_field_csv(os, f);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line.rfind("# grid dim=2 lengths=", 0), 0u);
    EXPECT_NE(line.find("cells=4,4"), std::string::npos);
    std::size_t rows = 0;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string idx, x, y, v;
        std::getline(ls, idx, ',');
        std::getline(ls, x, ',');
        std::getline(ls, y, ',');
        std::getline(ls, v, ',');
        EXPECT_EQ(std::stoul(idx), rows);
        EXPECT_EQ(std::stod(v), f[rows]);  // 17 significant digits round-trip exactly
        ++rows;
    }
    EXPECT_EQ(rows, g.size());
    EXPECT_EQ(format_real(0.1), "0.10000000000000001");
}
