#include <cmath>
#include <algorithm>
#include <limits>

#include <gtest/gtest.h>

#include "angio/dynamics.hpp"
#include "angio/elliptic.hpp"
#include "angio/errors.hpp"
#include "angio/thresholds.hpp"
#include "support.hpp"

using namespace angio;
using angio::testing::kPi;

namespace {

ModelParams params(double chi, double xi1, double xi2, double d, double a, double mu, double theta, int n = 1)
{
    ModelParams p;
    p.chi = chi;
    p.xi1 = xi1;
    p.xi2 = xi2;
    p.d = d;
    p.a = a;
    p.mu = mu;
    p.theta = theta;
    p.n_dim = n;
    return p;
}

Trajectory short_run(const ModelParams& p, double t_end = 2.0)
{
    const Grid g = build_grid(1, {1.0}, {64});
    InitialSpec spec;
    spec.profile = InitialProfile::cosine_bump;
    spec.base = 1.2;
    spec.amplitude = 0.3;
    spec.v_base = 0.8;
    SolverConfig cfg;
    cfg.dt = 1e-2;
    cfg.t_end = t_end;
    return run(make_initial(g, spec), p, cfg);
}

}  // namespace

TEST(M1, Branches)
{
    EXPECT_EQ(compute_m1(2.0, params(0, 1, 1, 1, 0, 0, 1), 1.0), 2.0);
    EXPECT_NEAR(compute_m1(2.0, params(0, 1, 1, 1, 1, 1, 1), 1.0), 4.0, 1e-14);
    EXPECT_NEAR(compute_m1(2.0, params(0, 1, 1, 1, 1, 1e12, 1), 1.0), 2.0, 1e-10);
    EXPECT_TRUE(std::isinf(compute_m1(2.0, params(0, 1, 1, 1, 1, 0, 1), 1.0)));
    EXPECT_THROW(compute_m1(0.0, params(0, 1, 1, 1, 0, 0, 1), 1.0), InvalidArgument);
}

TEST(M0, ExampleAndLargeD)
{
    const GenericConstants g;
    EXPECT_NEAR(structural_M0(params(0, 1, 1, 1, 0, 0, 1, 2), g), 6.0, 1e-14);
    double previous = std::numeric_limits<double>::infinity();
    for (double d : {0.5, 1.0, 2.0, 8.0, 1e3, 1e9}) {
        const double m = structural_M0(params(0, 1, 1.5, d, 0, 0, 1, 2), g);
        EXPECT_LE(m, previous);
        previous = m;
    }
    EXPECT_NEAR(previous, (1 + 1 / 1.5) * (1 + 1.5), 1e-6);
    EXPECT_THROW(structural_M0(params(0, 1, 0, 1, 0, 0, 1), g), InvalidArgument);
}

TEST(GradwBound, BranchesAndConvexity)
{
    const GenericConstants g;
    const ModelParams conv = params(0.5, 1, 1, 2, 0, 0, 1);
    EXPECT_EQ(gradw_branch(conv, g), GradwBranch::convection);
    EXPECT_EQ(branch_constant(conv, 3.0, g), conv.xi1);

    // mu = 0 below the convection requirement: xi1 = 0.1 < chi^2 = 1
    try {
        gradw_branch(params(1, 0.1, 1, 1, 0, 0, 1), g);
        FAIL() << "expected InvalidArgument";
    } catch (const InvalidArgument& e) {
        EXPECT_NE(std::string(e.what()).find("xi1 >= xi0 chi^2"), std::string::npos) << e.what();
    }
    EXPECT_THROW(gradw_branch(params(1, 1, 1, 1, 1, 0.5, 1), g), InvalidArgument);  // mu not above 1
    EXPECT_THROW(gradw_branch(params(1, 1, 1, 1, 1, 1, 0.5), g), InvalidArgument);

    const ModelParams lin = params(0.5, 1, 1, 1, 1, 2, 1);
    EXPECT_EQ(gradw_branch(lin, g), GradwBranch::logistic_linear);
    EXPECT_NEAR(branch_constant(lin, 3.0, g), logistic_bound_factor(lin, 1.0), 0.0);
    // M_mu = (1 + xi1/mu + 1/mu) mu^{-2} for n = 1, theta = 1
    EXPECT_NEAR(logistic_bound_factor(lin, 1.0), (1 + 0.5 + 0.5) / 4.0, 1e-15);

    const ModelParams sup = params(0.5, 1, 1, 2, 1, 2, 3);
    EXPECT_EQ(gradw_branch(sup, g), GradwBranch::logistic_superlinear);
    const double M0 = 1.7;
    const double inner = (1 + 1 / std::pow(2.0, 3.0)) * (1 + M0) * M0 * 0.25;
    const double expected = logistic_bound_factor(sup, 3.0) + 2.0 / std::pow(2.0, 3.0 / 2.0) * std::pow(inner, 5.0 / 2.0);
    EXPECT_NEAR(branch_constant(sup, M0, g), expected, 1e-13 * expected);

    // convex: d_Omega term drops
    const double convex = structural_gradw_bound(conv, M0, true, g);
    const double nonconvex = structural_gradw_bound(conv, M0, false, g);
    EXPECT_NEAR(convex, std::sqrt(1 + 0.25 / 2 + 1), 1e-14);
    EXPECT_NEAR(nonconvex, std::sqrt(1 + (1 + 2 * std::pow(M0, 4.0)) / 2 * 0.25 + 1), 1e-13);
    EXPECT_GT(nonconvex, convex);
}

TEST(Lambda, ExampleValues)
{
    const double cp = 1 / kPi;
    EXPECT_NEAR(lambda_of_z(params(0, 0, 1, 1, 1, 1, 2), cp, 4.0), 2 / (kPi * kPi), 1e-15);
    EXPECT_NEAR(lambda_of_z(params(0, 0, 1, 1, 1, 1, 2), cp, 4.0), 0.20264, 1e-5);
    // z = 0, xi1 = 0: chi^2 / (2 d a^{(theta - 2)/theta})
    const ModelParams p = params(0.7, 0, 1, 1.5, 3, 1, 1);
    EXPECT_NEAR(lambda_of_z(p, cp, 0.0), 0.49 / (2 * 1.5 * std::pow(3.0, -1.0)), 1e-14);
    // theta = 2: independent of a
    EXPECT_NEAR(lambda_of_z(params(0.3, 0.2, 1, 2, 1, 1, 2), cp, 1.0), lambda_of_z(params(0.3, 0.2, 1, 2, 7, 1, 2), cp, 1.0),
                1e-15);
    EXPECT_THROW(lambda_of_z(params(0, 0, 1, 1, 0, 1, 2), cp, 1.0), InvalidArgument);
}

TEST(MuThreshold, VanishingAndMonotone)
{
    const ModelParams zero = params(0, 0, 0, 1, 1, 1e-3, 1);
    const Trajectory t = short_run(zero, 0.5);
    const MuThreshold m = empirical_mu_threshold(t, zero, 1 / kPi);
    EXPECT_EQ(m.value, 0.0);
    EXPECT_TRUE(m.passes);

    const ModelParams p = params(0.5, 0.5, 0.5, 1, 1, 1, 1);
    double prev = -1.0;
    for (double z : {0.0, 0.5, 1.0, 4.0}) {
        const double v = lambda_of_z(p, 1 / kPi, z);
        EXPECT_GT(v, prev);
        prev = v;
    }
    Trajectory empty = t;
    empty.records.clear();
    EXPECT_THROW(empirical_mu_threshold(empty, p, 1.0), InvalidArgument);
}

TEST(D0Check, ChiZeroAndMonotoneInD)
{
    const D0Check z = evaluate_d0_check(2.0, 3.0, params(0, 1, 1, 0.01, 0, 0, 1));
    EXPECT_EQ(z.check_value, 0.0);
    EXPECT_TRUE(z.passes);

    double prev = -std::numeric_limits<double>::infinity();
    for (double d : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const D0Check c = evaluate_d0_check(0.6, 0.1, params(0.5, 1, 1, d, 0, 0, 1));
        EXPECT_GT(c.check_value, prev);
        prev = c.check_value;
        // (d - (2.6)^2 * 0.5 / 4 - 0.01 / 4) * 0.5
        EXPECT_NEAR(c.check_value, (d - 6.76 * 0.125 - 0.0025) * 0.5, 1e-14);
    }
    const D0Check big = evaluate_d0_check(0.6, 0.1, params(0.5, 1, 1, 8, 0, 0, 1));
    EXPECT_TRUE(big.passes);
    EXPECT_GT(big.epsilon1, 0.0);
    EXPECT_LE(big.epsilon1, 0.5);
    EXPECT_THROW(evaluate_d0_check(1, 1, params(0.5, 0, 1, 1, 0, 0, 1)), InvalidArgument);
}

TEST(D0Check, EmpiricalOnC1LikeRun)
{
    const ModelParams p = params(0.5, 1, 1, 4, 0, 0, 1);
    const Trajectory t = short_run(p);
    const D0Check c = empirical_d0_check(t, p);
    EXPECT_TRUE(c.passes);
    EXPECT_GT(c.epsilon1, 0.0);
    EXPECT_LE(c.epsilon1, 0.5);
}

TEST(Sigma, ValuesAndMonotonicity)
{
    EXPECT_NEAR(sigma_rate(params(0, 0, 0, 1, 1, 1, 1), 1 / kPi, 2.0), 1.0, 0.0);
    const double cp = 1 / kPi;
    double prev = -std::numeric_limits<double>::infinity();
    for (double mu : {0.5, 1.0, 2.0, 4.0}) {
        const ModelParams p = params(0.5, 0.5, 0.5, 1, 1, mu, 1);
        const double b = 1 / mu;
        const double direct = mu - ((1 + cp * cp * 0.25 * 0.64) * 0.25 + cp * cp * 0.25) / (2 * std::pow(b, -1.0));
        EXPECT_NEAR(sigma_bracket(p, cp, 0.8), direct, 1e-14);
        EXPECT_GT(sigma_bracket(p, cp, 0.8), prev);
        prev = sigma_bracket(p, cp, 0.8);
        EXPECT_LE(sigma_rate(p, cp, 0.8), 1.0);
    }
    EXPECT_THROW(sigma_rate(params(5, 5, 5, 1, 1, 0.1, 1), cp, 10.0), InvalidArgument);
    EXPECT_THROW(sigma_rate(params(0, 0, 0, 1, 0, 1, 1), cp, 1.0), InvalidArgument);
}

TEST(Regimes, Classification)
{
    const GenericConstants g;
    const RegimeClassification two = condition_presets(params(0.5, 1, 1, 1, 1, 1, 1, 2), g);
    EXPECT_DOUBLE_EQ(two.exponent_outer, 12.0 / 7.0);
    EXPECT_DOUBLE_EQ(two.exponent_inner, 2.0 / 7.0);
    EXPECT_NEAR(two.mu_required, std::pow(0.5, 2.0 / 7.0), 1e-15);

    EXPECT_EQ(condition_presets(params(0.5, 1, 1, 1, 1, 0.1, 1.5), g).regime, Regime::R3);
    EXPECT_EQ(condition_presets(params(1, 10, 1, 1, 0, 0, 1), g).regime, Regime::R1);
    EXPECT_EQ(condition_presets(params(2, 10, 1, 1, 1, 100, 1), g).regime, Regime::R2);
    EXPECT_EQ(condition_presets(params(2, 0.1, 1, 1, 0, 0, 1), g).regime, Regime::open);
    // precedence: R3 wins even when the convection condition holds
    const RegimeClassification both = condition_presets(params(0.1, 10, 1, 1, 1, 1, 2), g);
    EXPECT_TRUE(both.convection_condition);
    EXPECT_EQ(both.regime, Regime::R3);
}

TEST(Report, ReEvaluatesFromLoggedValues)
{
    const ModelParams p = params(0.5, 0.5, 0.5, 1, 1, 1, 1);
    const Trajectory t = short_run(p);
    const Grid g = t.terminal.u.grid();
    const double cp = spectral_info(g).poincare_cp;
    const ThresholdReport r = build_threshold_report(t, p, g, cp, GenericConstants{});
    double A = 0.0;
    for (const auto& rec : t.records) A = std::max(A, rec.linf_v);
    EXPECT_EQ(r.empirical_A, A);
    const double hand = std::pow(
        (p.d * p.chi * p.chi + p.d * p.d * cp * cp * p.xi1 * p.xi1 + cp * cp * p.xi2 * p.xi2 * A * A) /
            (2 * p.d * p.d * std::pow(p.a, (p.theta - 2) / p.theta)),
        p.theta / 2);
    EXPECT_NEAR(r.mu_threshold, hand, 1e-12 * hand);
    EXPECT_TRUE(r.mu_threshold_passes);
    EXPECT_NEAR(r.sigma, sigma_rate(p, cp, A), 1e-15);
    EXPECT_EQ(r.b, 1.0);
    EXPECT_EQ(r.regime, "R2");
    EXPECT_TRUE(std::isnan(r.d0_check_value));
    EXPECT_NE(to_key_value(r).find("mu_threshold_check=pass"), std::string::npos);

    // the CSV row has one entry per header column
    const std::string header = threshold_csv_header(), row = threshold_csv_row(r);
    EXPECT_EQ(std::count(header.begin(), header.end(), ','), std::count(row.begin(), row.end(), ','));
}

TEST(Report, UndefinedEntriesAreNaNWithNotes)
{
    const ModelParams p = params(1, 0.1, 1, 1, 0, 0, 1);  // no gradient branch applies
    const Trajectory t = short_run(p, 0.2);
    const Grid g = t.terminal.u.grid();
    const ThresholdReport r = build_threshold_report(t, p, g, 1 / kPi, GenericConstants{});
    EXPECT_EQ(r.gradw_branch, "none");
    EXPECT_TRUE(std::isnan(r.gradw_bound));
    EXPECT_TRUE(std::isnan(r.sigma));
    EXPECT_FALSE(r.notes.empty());
    EXPECT_NE(to_key_value(r).find("# note: "), std::string::npos);
}
