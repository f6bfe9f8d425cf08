#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "angio/harness/config.hpp"
#include "support.hpp"

using namespace angio;
using namespace angio::harness;

namespace {

std::string error_of(const std::string& text)
{
    try {
        parse_config_text(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(Config, MinimalC1GetsDefaults)
{
    const ScenarioConfig c = parse_config_text("# C1\npreset = C1_no_mitosis\ngrid.cells = 128\nparams.d = 5\n");
    EXPECT_EQ(c.preset, Preset::C1_no_mitosis);
    EXPECT_EQ(c.dim, 1);
    EXPECT_EQ(c.params.n_dim, 1);
    EXPECT_EQ(c.params.d, 5.0);
    EXPECT_EQ(c.params.chi, 0.5);
    EXPECT_EQ(c.params.xi1, 1.0);
    EXPECT_EQ(c.params.xi2, 1.0);
    EXPECT_EQ(c.params.a, 0.0);
    EXPECT_EQ(c.params.mu, 0.0);
    EXPECT_EQ(c.solver.t_end, 30.0);
    EXPECT_EQ(c.solver.dt, 1e-2);
    EXPECT_EQ(c.solver.flux_scheme, FluxScheme::upwind);
    EXPECT_EQ(c.initial.profile, InitialProfile::cosine_bump);
    EXPECT_EQ(c.output_dir, "out");
    EXPECT_EQ(c.seed, 0u);
    EXPECT_EQ(c.grid().length(0), 1.0);
    EXPECT_EQ(c.key_lines.at("params.d"), 4);
    EXPECT_EQ(c.constants.K1, 1.0);
}

TEST(Config, TwoDimensionalAndOverrides)
{
    const ScenarioConfig c = parse_config_text(
        "preset = custom\n"
        "grid.cells = 16, 32\n"
        "grid.lengths = 1, 2\n"
        "grid.convex = false\n"
        "params.chi = 0.2\n"
        "solver.flux_scheme = central\n"
        "solver.dt = 1e-3\n"
        "solver.elliptic.tolerance = 1e-11\n"
        "initial.profile = random_positive\n"
        "initial.amplitude = 0.1\n"
        "seed = 9\n"
        "constants.K2 = 3\n"
        "output.dir = somewhere\n");
    EXPECT_EQ(c.dim, 2);
    EXPECT_EQ(c.params.n_dim, 2);
    EXPECT_FALSE(c.grid().convex());
    EXPECT_EQ(c.grid().cells(1), 32);
    EXPECT_EQ(c.grid().length(1), 2.0);
    EXPECT_EQ(c.solver.flux_scheme, FluxScheme::central);
    EXPECT_EQ(c.solver.elliptic.tolerance, 1e-11);
    EXPECT_EQ(c.seed, 9u);
    EXPECT_EQ(c.constants.K2, 3.0);
    EXPECT_EQ(c.output_dir, "somewhere");
    // the seed reaches the initial data
    const ScenarioConfig other = parse_config_text(
        "preset = custom\ngrid.cells = 16, 32\ngrid.lengths = 1, 2\ninitial.profile = random_positive\n"
        "initial.amplitude = 0.1\nsolver.dt = 1e-3\nseed = 10\n");
    EXPECT_NE(c.initial_state().u[5], other.initial_state().u[5]);
}

TEST(Config, NegativeMuNamesConstraintAndLine)
{
    const std::string e = error_of("preset = custom\ngrid.cells = 32\nparams.mu = -1\n");
    EXPECT_NE(e.find("line 3"), std::string::npos) << e;
    EXPECT_NE(e.find("params.mu"), std::string::npos) << e;
    EXPECT_NE(e.find(">= 0"), std::string::npos) << e;
}

TEST(Config, C2WithZeroACitesDegenerateB)
{
    const std::string e = error_of("preset = C2_logistic\ngrid.cells = 32\nparams.a = 0\n");
    EXPECT_NE(e.find("params.a"), std::string::npos) << e;
    EXPECT_NE(e.find("b = (a/mu)^{1/theta}"), std::string::npos) << e;
    EXPECT_NE(e.find("degenerates"), std::string::npos) << e;
}

TEST(Config, PresetConstraints)
{
    EXPECT_NE(error_of("preset = C1_no_mitosis\ngrid.cells = 32\nparams.a = 1\n").find("no mitosis"), std::string::npos);
    EXPECT_NE(error_of("preset = chi_zero_corollary\ngrid.cells = 32\nparams.chi = 1\n").find("chi = 0"),
              std::string::npos);
    EXPECT_NE(error_of("preset = R3_theta_gt1\ngrid.cells = 32\nparams.theta = 1\n").find("theta > 1"),
              std::string::npos);
    EXPECT_NE(error_of("preset = heat_oracle\ngrid.cells = 32\nparams.xi1 = 1\n").find("params.xi1"),
              std::string::npos);
}

TEST(Config, RejectsMalformedFiles)
{
    EXPECT_NE(error_of("grid.cells = 32\n").find("preset"), std::string::npos);
    EXPECT_NE(error_of("preset = custom\n").find("grid.cells"), std::string::npos);
    EXPECT_NE(error_of("preset = nonsense\ngrid.cells = 32\n").find("preset"), std::string::npos);

    const std::string unknown = error_of("preset = custom\ngrid.cells = 32\nparams.zeta = 1\n");
    EXPECT_NE(unknown.find("line 3: params.zeta: unknown key"), std::string::npos) << unknown;

    const std::string dup = error_of("preset = custom\ngrid.cells = 32\nparams.d = 1\nparams.d = 2\n");
    EXPECT_NE(dup.find("line 4"), std::string::npos) << dup;
    EXPECT_NE(dup.find("duplicate"), std::string::npos) << dup;

    EXPECT_NE(error_of("preset = custom\ngrid.cells = 32\njust words\n").find("line 3"), std::string::npos);
    EXPECT_NE(error_of("preset = custom\ngrid.cells = 32\nparams.d = abc\n").find("finite number"), std::string::npos);
    EXPECT_NE(error_of("preset = custom\ngrid.cells = 2\n").find("grid.cells"), std::string::npos);
    EXPECT_NE(error_of("preset = custom\ngrid.cells = 32\ninitial.profile = cosine_bump\ninitial.amplitude = 1.5\n")
                  .find("initial.amplitude"),
              std::string::npos);
    EXPECT_NE(error_of("preset = custom\ngrid.cells = 32\nsolver.flux_scheme = spline\n").find("solver.flux_scheme"),
              std::string::npos);
}

TEST(Config, DtAboveStableStepIsRejected)
{
    const std::string e = error_of("preset = C1_no_mitosis\ngrid.cells = 32\nsolver.dt = 0.5\n");
    EXPECT_NE(e.find("solver.dt"), std::string::npos) << e;
    EXPECT_NE(e.find("line 3"), std::string::npos) << e;
    EXPECT_NE(e.find("stable step"), std::string::npos) << e;
}

TEST(Config, SweepAxes)
{
    const ScenarioConfig c = parse_config_text(
        "preset = C2_logistic\ngrid.cells = 32\n"
        "sweep.params.mu = 1, 2, 4\nsweep.params.chi = 0.1,0.2\nsweep.max_parallel = 3\n");
    ASSERT_EQ(c.sweep_axes.size(), 2u);
    EXPECT_EQ(c.sweep_axes[0].key, "params.mu");
    EXPECT_EQ(c.sweep_axes[0].values, (std::vector<std::string>{"1", "2", "4"}));
    EXPECT_EQ(c.sweep_axes[1].values, (std::vector<std::string>{"0.1", "0.2"}));
    EXPECT_EQ(c.max_parallel, 3);

    EXPECT_NE(error_of("preset = custom\ngrid.cells = 32\nsweep.grid.cells = 8, 16\n").find("can be swept"),
              std::string::npos);
    const std::string bad_value = error_of("preset = custom\ngrid.cells = 32\nsweep.params.mu = 1, x\n");
    EXPECT_NE(bad_value.find("line 3: params.mu"), std::string::npos) << bad_value;
}

TEST(Config, ParseFileAndMissingFile)
{
    const auto dir = angio::testing::scratch_dir("config_file");
    const auto path = dir / "run.cfg";
    std::ofstream(path) << "preset = heat_oracle\ngrid.cells = 64\n";
    const ScenarioConfig c = parse_config(path.string());
    EXPECT_EQ(c.preset, Preset::heat_oracle);
    EXPECT_EQ(c.solver.record_every, 1);
    EXPECT_THROW(parse_config((dir / "absent.cfg").string()), ConfigError);
}
