#include "angio/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "angio/errors.hpp"
#include "angio/functionals.hpp"
#include "angio/linalg.hpp"

namespace angio {

namespace {

class NonFiniteStage : public StepFailure {
public:
    using StepFailure::StepFailure;
};

struct FaceVelocities {
    FaceFlux u;
    FaceFlux v;
};

FaceVelocities advective_velocities(const SimState& state, const ModelParams& p)
{
    const FaceFlux gv = gradient_faces(state.v);
    const FaceFlux gw = gradient_faces(state.w);
    FaceVelocities vel{FaceFlux(state.u.grid()), FaceFlux(state.u.grid())};
    for (int a = 0; a < 2; ++a) {
        const auto& dv = gv.axis[static_cast<std::size_t>(a)];
        const auto& dw = gw.axis[static_cast<std::size_t>(a)];
        auto& su = vel.u.axis[static_cast<std::size_t>(a)];
        auto& sv = vel.v.axis[static_cast<std::size_t>(a)];
        for (std::size_t f = 0; f < dv.size(); ++f) {
            su[f] = p.chi * dv[f] - p.xi1 * dw[f];
            sv[f] = -p.xi2 * dw[f];
        }
    }
    return vel;
}

// Turns a face velocity field into the advective flux of `q` in place.
void carry(FaceFlux& velocity, const Field& q, FluxScheme scheme)
{
    const Grid& g = q.grid();
    const int nx = g.cells(0);
    const int ny = g.cells(1);
    auto face_value = [scheme](double s, double left, double right) {
        if (scheme == FluxScheme::central) {
            return 0.5 * (left + right);
        }
        return s > 0.0 ? left : right;
    };
    auto& fx = velocity.axis[0];
    for (int i = 0; i + 1 < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const std::size_t f = static_cast<std::size_t>(i) * ny + j;
            fx[f] *= face_value(fx[f], q[g.index(i, j)], q[g.index(i + 1, j)]);
        }
    }
    if (g.dim() == 2) {
        auto& fy = velocity.axis[1];
        for (int i = 0; i < nx; ++i) {
            for (int j = 0; j + 1 < ny; ++j) {
                const std::size_t f = static_cast<std::size_t>(i) * (ny - 1) + j;
                fy[f] *= face_value(fy[f], q[g.index(i, j)], q[g.index(i, j + 1)]);
            }
        }
    }
}

double max_abs(const std::vector<double>& xs)
{
    double m = 0.0;
    for (double x : xs) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

std::string to_string(FluxScheme scheme) { return scheme == FluxScheme::upwind ? "upwind" : "central"; }

FluxScheme parse_flux_scheme(const std::string& name)
{
    if (name == "upwind") return FluxScheme::upwind;
    if (name == "central") return FluxScheme::central;
    throw InvalidArgument("unknown flux scheme '" + name + "' (expected upwind or central)");
}

std::string to_string(InitialProfile profile)
{
    switch (profile) {
    case InitialProfile::constant:
        return "constant";
    case InitialProfile::cosine_bump:
        return "cosine_bump";
    case InitialProfile::gaussian_bump:
        return "gaussian_bump";
    case InitialProfile::random_positive:
        return "random_positive";
    }
    return "unknown";
}

InitialProfile parse_initial_profile(const std::string& name)
{
    for (auto p : {InitialProfile::constant, InitialProfile::cosine_bump, InitialProfile::gaussian_bump,
                   InitialProfile::random_positive}) {
        if (to_string(p) == name) return p;
    }
    throw InvalidArgument("unknown initial profile '" + name +
                          "' (expected constant, cosine_bump, gaussian_bump or random_positive)");
}

void SolverConfig::validate() const
{
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be > 0");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidArgument("t_end must be > 0");
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw InvalidArgument("cfl_safety must lie in (0, 1]");
    if (!(blowup_threshold > 0.0)) throw InvalidArgument("blowup_threshold must be > 0");
    if (record_every < 1) throw InvalidArgument("record_every must be >= 1");
    elliptic.validate();
}

SimState make_initial(const Grid& grid, const InitialSpec& spec, const EllipticConfig& elliptic)
{
    const double v_base = std::isnan(spec.v_base) ? spec.base : spec.v_base;
    const int dim = grid.dim();
    std::vector<double> su(grid.size(), 0.0);
    std::vector<double> sv(grid.size(), 0.0);
    // Range of the shape function on the continuum, used to reject bad amplitudes
    // independently of where the cell centers happen to fall.
    double shape_lo = 0.0;
    double shape_hi = 0.0;

    switch (spec.profile) {
    case InitialProfile::constant:
        break;
    case InitialProfile::cosine_bump:
        shape_lo = -1.0;
        shape_hi = 1.0;
        for (std::size_t c = 0; c < grid.size(); ++c) {
            const auto [i, j] = grid.coords(c);
            double s = std::cos(std::numbers::pi * grid.center(0, i) / grid.length(0));
            if (dim == 2) s *= std::cos(std::numbers::pi * grid.center(1, j) / grid.length(1));
            su[c] = sv[c] = s;
        }
        break;
    case InitialProfile::gaussian_bump: {
        if (!(spec.width > 0.0)) {
            throw InvalidArgument("gaussian_bump needs width > 0");
        }
        shape_hi = 1.0;
        for (std::size_t c = 0; c < grid.size(); ++c) {
            const auto [i, j] = grid.coords(c);
            const double dx = grid.center(0, i) - 0.5 * grid.length(0);
            const double dy = dim == 2 ? grid.center(1, j) - 0.5 * grid.length(1) : 0.0;
            su[c] = sv[c] = std::exp(-(dx * dx + dy * dy) / (2.0 * spec.width * spec.width));
        }
        break;
    }
    case InitialProfile::random_positive: {
        shape_lo = -1.0;
        shape_hi = 1.0;
        std::mt19937_64 rng(spec.seed);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (double& x : su) x = dist(rng);
        for (double& x : sv) x = dist(rng);
        break;
    }
    }

    auto lowest = [&](double base, double amp) { return base + std::min(amp * shape_lo, amp * shape_hi); };
    if (!(lowest(spec.base, spec.amplitude) > 0.0)) {
        throw InvalidArgument("initial u0 = " + format_real(spec.base) + " + " + format_real(spec.amplitude) +
                              " * " + to_string(spec.profile) + " is not positive everywhere");
    }
    if (!(lowest(v_base, spec.v_amplitude) >= 0.0)) {
        throw InvalidArgument("initial v0 = " + format_real(v_base) + " + " + format_real(spec.v_amplitude) +
                              " * " + to_string(spec.profile) + " is negative somewhere");
    }

    Field u(grid);
    Field v(grid);
    for (std::size_t c = 0; c < grid.size(); ++c) {
        u[c] = spec.base + spec.amplitude * su[c];
        v[c] = v_base + spec.v_amplitude * sv[c];
    }
    EllipticSolution ws = solve_w_detailed(u, elliptic);
    return SimState{0.0, std::move(u), std::move(v), std::move(ws.w), ws.residual};
}

double stable_dt(const SimState& state, const ModelParams& params, const SolverConfig& cfg)
{
    const FaceVelocities vel = advective_velocities(state, params);
    const Grid& g = state.u.grid();
    double bound = 1.0;  // explicit +u source in the v equation
    for (int a = 0; a < g.dim(); ++a) {
        const auto ua = static_cast<std::size_t>(a);
        const double s = std::max(max_abs(vel.u.axis[ua]), max_abs(vel.v.axis[ua]));
        if (s > 0.0) {
            bound = std::min(bound, g.spacing(a) / s);
        }
    }
    const double reaction = params.a + params.mu * std::pow(state.u.max_abs(), params.theta) + 1.0;
    bound = std::min(bound, 1.0 / reaction);
    return cfg.cfl_safety * bound;
}

Field implicit_diffusion_solve(const Field& rhs, double shift, double coefficient)
{
    const Grid& g = rhs.grid();
    if (coefficient == 0.0) {
        Field out = rhs;
        out *= 1.0 / shift;
        return out;
    }
    if (g.dim() == 1) {
        const int n = g.cells(0);
        const double k = coefficient / (g.spacing(0) * g.spacing(0));
        std::vector<double> lower(n, -k), diag(n, shift + 2.0 * k), upper(n, -k);
        diag.front() = shift + k;
        diag.back() = shift + k;
        Field out(g);
        solve_tridiagonal(lower, diag, upper, rhs.values(), out.values());
        return out;
    }
    const LinearOperator op = [&g, shift, coefficient](std::span<const double> x, std::span<double> y) {
        detail::apply_laplacian(g, x, y);
        for (std::size_t i = 0; i < x.size(); ++i) {
            y[i] = shift * x[i] - coefficient * y[i];
        }
    };
    Field out = rhs;
    out *= 1.0 / shift;
    const CgResult cg =
        conjugate_gradient(op, rhs.values(), out.values(), 1e-13, static_cast<int>(10 * g.size()), false);
    if (!cg.converged && cg.relative_residual > 1e-11) {
        throw ConvergenceError("implicit diffusion solve stalled at relative residual " +
                                   format_real(cg.relative_residual),
                               cg.relative_residual, cg.iterations);
    }
    return out;
}

SimState advance(const SimState& state, const ModelParams& params, const SolverConfig& cfg, double dt)
{
    const double bound = stable_dt(state, params, cfg);
    if (dt > bound * (1.0 + 1e-12)) {
        throw StepFailure("dt = " + format_real(dt) + " exceeds the stability bound " + format_real(bound) +
                          " at t = " + format_real(state.t));
    }
    FaceVelocities flux = advective_velocities(state, params);
    carry(flux.u, state.u, cfg.flux_scheme);
    carry(flux.v, state.v, cfg.flux_scheme);
    const Field div_u = divergence(flux.u);
    const Field div_v = divergence(flux.v);

    const Grid& g = state.u.grid();
    Field u_star(g);
    Field v_star(g);
    for (std::size_t c = 0; c < g.size(); ++c) {
        const double u = state.u[c];
        const double growth = params.a - params.mu * std::pow(u, params.theta);
        u_star[c] = u - dt * div_u[c] + dt * u * growth;
        v_star[c] = state.v[c] - dt * div_v[c] + dt * u;
    }
    if (!u_star.all_finite() || !v_star.all_finite()) {
        throw NonFiniteStage("non-finite values after the explicit stage at t = " + format_real(state.t));
    }
    if (!(u_star.min() > 0.0) || !(v_star.min() >= 0.0)) {
        throw StepFailure("positivity lost in the explicit stage at t = " + format_real(state.t) +
                          " (min u* = " + format_real(u_star.min()) + ", min v* = " + format_real(v_star.min()) +
                          ")");
    }

    SimState next{state.t + dt, implicit_diffusion_solve(u_star, 1.0, dt),
                  implicit_diffusion_solve(v_star, 1.0 + dt, dt * params.d), Field(g), 0.0};
    try {
        EllipticSolution ws = solve_w_detailed(next.u, cfg.elliptic, state.w);
        next.w = std::move(ws.w);
        next.elliptic_residual = ws.residual;
    } catch (const ConvergenceError& e) {
        throw StepFailure(std::string("elliptic solve failed: ") + e.what());
    }
    return next;
}

SimState step(const SimState& state, const ModelParams& params, const SolverConfig& cfg)
{
    return advance(state, params, cfg, cfg.dt);
}

double reference_level(const SimState& initial, const ModelParams& params)
{
    return params.logistic() ? params.carrying_capacity() : mean(initial.u);
}

Trajectory run(const SimState& initial, const ModelParams& params, const SolverConfig& cfg)
{
    params.validate();
    cfg.validate();
    if (initial.u.min() < 0.0 || initial.v.min() < 0.0 || initial.u.max() <= 0.0) {
        throw InvalidArgument("initial data must satisfy u0 >= 0, v0 >= 0 and u0 not identically zero");
    }

    Trajectory traj{{}, initial, TerminationReason::completed, {}, cfg.dt, cfg.record_every, 0.0, 0};
    traj.reference_level = reference_level(initial, params);
    traj.records.push_back(diagnose(initial, params, traj.reference_level));

    const long steps = std::max(1L, static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-9)));
    SimState state = initial;
    for (long k = 1; k <= steps; ++k) {
        const bool last = k == steps;
        const double t_next = last ? cfg.t_end : initial.t + static_cast<double>(k) * cfg.dt;
        try {
            state = advance(state, params, cfg, t_next - state.t);
        } catch (const NonFiniteStage& e) {
            traj.reason = TerminationReason::blowup_detected;
            traj.message = e.what();
            break;
        } catch (const StepFailure& e) {
            traj.reason = TerminationReason::step_failure;
            traj.message = e.what();
            break;
        } catch (const Error& e) {
            traj.reason = TerminationReason::step_failure;
            traj.message = e.what();
            break;
        }
        state.t = t_next;
        traj.steps = k;
        const bool blowup = state.u.max_abs() > cfg.blowup_threshold;
        if (last || blowup || k % cfg.record_every == 0) {
            traj.records.push_back(diagnose(state, params, traj.reference_level));
        }
        if (blowup) {
            traj.reason = TerminationReason::blowup_detected;
            traj.message = "||u||_inf = " + format_real(state.u.max_abs()) + " exceeded the blow-up threshold " +
                           format_real(cfg.blowup_threshold) + " at t = " + format_real(state.t);
            break;
        }
    }
    traj.terminal = std::move(state);
    return traj;
}

}  // namespace angio
