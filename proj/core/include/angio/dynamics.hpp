#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "angio/elliptic.hpp"
#include "angio/grid.hpp"
#include "angio/model.hpp"

namespace angio {

/// Face value used to carry a cell quantity along an advective velocity.
enum class FluxScheme {
    upwind,   ///< value from the cell the velocity comes from; positivity preserving
    central,  ///< arithmetic mean of the two neighbours; second order, for convergence studies
};

std::string to_string(FluxScheme scheme);
FluxScheme parse_flux_scheme(const std::string& name);

struct SolverConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    double cfl_safety = 0.2;
    FluxScheme flux_scheme = FluxScheme::upwind;
    double blowup_threshold = 1e6;
    int record_every = 10;
    EllipticConfig elliptic;

    void validate() const;
};

enum class InitialProfile { constant, cosine_bump, gaussian_bump, random_positive };

std::string to_string(InitialProfile profile);
InitialProfile parse_initial_profile(const std::string& name);

/// u0 = base + amplitude * s(x), v0 = v_base + v_amplitude * s(x), where s is
///   constant:        0
///   cosine_bump:     prod_a cos(pi x_a / L_a)
///   gaussian_bump:   exp(-|x - center|^2 / (2 width^2))
///   random_positive: independent uniform draws in [-1, 1] per cell (v uses its own draws)
struct InitialSpec {
    InitialProfile profile = InitialProfile::constant;
    double base = 1.0;
    double amplitude = 0.0;
    double width = 0.1;
    double v_base = std::numeric_limits<double>::quiet_NaN();  ///< NaN: same as base
    double v_amplitude = 0.0;
    std::uint64_t seed = 0;
};

/// Positive u0, nonnegative v0 and the matching w. Throws InvalidArgument when
/// the amplitude would make u0 nonpositive somewhere or v0 negative.
SimState make_initial(const Grid& grid, const InitialSpec& spec, const EllipticConfig& elliptic = {});

/// cfl_safety * min(h_a / max|s|_a over axes, 1 / (a + mu ||u||_inf^theta + 1), 1),
/// where s ranges over the advective face velocities of u and v. Diffusion is implicit
/// and does not enter.
double stable_dt(const SimState& state, const ModelParams& params, const SolverConfig& cfg);

/// One step of length cfg.dt:
///   1. explicit conservative advection (face velocities chi dv - xi1 dw for u, -xi2 dw for v)
///      plus the logistic reaction for u and the +u source for v, all at the old state;
///   2. backward Euler diffusion, (I - dt lap) u = u*, ((1 + dt) I - dt d lap) v = v*,
///      so the -v decay is implicit;
///   3. w from the new u.
/// Throws StepFailure if dt exceeds stable_dt, positivity is lost or a solve fails.
SimState step(const SimState& state, const ModelParams& params, const SolverConfig& cfg);

/// step() with an explicit step length (used for a shortened final step).
SimState advance(const SimState& state, const ModelParams& params, const SolverConfig& cfg, double dt);

/// Solves (shift I - coefficient lap) x = rhs with zero-flux boundaries.
/// Tridiagonal elimination in 1D, conjugate gradients in 2D.
Field implicit_diffusion_solve(const Field& rhs, double shift, double coefficient);

/// b for logistic parameters, otherwise the initial mean of u.
double reference_level(const SimState& initial, const ModelParams& params);

/// Steps from the initial state to cfg.t_end, recording diagnostics at t = 0, every
/// record_every steps and at the final step. Step failures and blow-up end the run
/// early with the matching termination reason; the records up to that point are kept.
Trajectory run(const SimState& initial, const ModelParams& params, const SolverConfig& cfg);

}  // namespace angio
