#pragma once

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "angio/grid.hpp"
#include "angio/model.hpp"

namespace angio {

/// int u ln(u / mean(u)). Throws InvalidArgument if any cell is nonpositive.
///
/// Evaluated as sum mean * phi(u / mean) with phi(r) = r ln r - r + 1 >= 0,
/// which equals the textbook form because int (u - mean) = 0, and does not
/// lose the value to cancellation when u is nearly constant.
double relative_entropy(const Field& u);

struct EntropyGaps {
    double lower_gap = 0.0;  ///< H - ||u - mean||_1^2 / (2 mean)
    double upper_gap = 0.0;  ///< ||u - mean||_2^2 / mean - H
};

/// Gaps of the two-sided entropy bound
///   ||u - m||_1^2 / (2m) <= int u ln(u/m) <= ||u - m||_2^2 / m.
/// The upper bound holds on any domain; the lower bound as written needs
/// |Omega| <= 1 (the sharp constant is 1 / (2 m |Omega|)).
EntropyGaps entropy_sandwich_check(const Field& u);

/// Discrete ||grad f||_2 from face differences.
double grad_l2(const Field& f);

/// int u ln(u / mean(u)) + chi/2 ||grad v||_2^2.
double lyap_F1(const SimState& state, double chi);

/// int (u - b - b ln(u/b)) + b chi^2 / (2d) int (v - b)^2 with b = (a/mu)^{1/theta}.
/// Throws InvalidArgument when a = 0 or mu = 0.
double lyap_F2(const SimState& state, const ModelParams& params);

/// Samples every DiagnosticsRecord field. `reference` is the level the
/// deviation norms are measured against.
DiagnosticsRecord diagnose(const SimState& state, const ModelParams& params, double reference);

/// Largest mismatch between consecutive records of
///   mass_u[k+1] - mass_u[k]  and  (t[k+1] - t[k]) (a mass_u[k] - mu int u_k^{theta+1}).
/// The reaction is evaluated at the left record, which is where the scheme
/// evaluates it, so with one record per step the residual is round-off.
double mass_balance_residual(const Trajectory& traj, const ModelParams& params);

struct DecayWindow {
    double t0 = 0.0;
    double t1 = 0.0;
};

struct RateFit {
    double window_start = 0.0;
    double window_end = 0.0;
    double rate = 0.0;  ///< minus the slope of ln(value) against t
    double intercept = 0.0;
    double r_squared = 0.0;
    int samples = 0;
};

/// Least squares fit of ln(value) = intercept - rate * t over samples with t in [t0, t1].
/// Needs at least 10 samples in the window, all positive.
RateFit fit_decay_rate(std::span<const double> t, std::span<const double> values, DecayWindow window);

/// Second half of the sampled time span.
DecayWindow default_window(std::span<const double> t);

/// Second half of the span over which the series stays above floor_ratio * max.
/// Past that point a decaying series is round-off noise and carries no rate.
DecayWindow signal_window(std::span<const double> t, std::span<const double> values, double floor_ratio = 1e-9);

/// Smooth Neumann-compatible test function sum c_kl cos(k pi x / Lx) cos(l pi y / Ly).
class TrigSeries {
public:
    struct Jet {
        double value = 0.0;
        std::array<double, 2> gradient{};
        std::array<std::array<double, 2>, 2> hessian{};
    };

    /// coefficients has modes^dim entries, index k * modes + l in 2D.
    TrigSeries(int dim, std::array<double, 2> lengths, int modes, std::vector<double> coefficients);

    static TrigSeries constant(const Grid& grid, double value);
    static TrigSeries cosine(const Grid& grid, int mode_x, int mode_y = 0, double amplitude = 1.0);

    Jet evaluate(double x, double y = 0.0) const;

    int dim() const noexcept { return dim_; }
    int modes() const noexcept { return modes_; }

private:
    int dim_;
    std::array<double, 2> lengths_;
    int modes_;
    std::vector<double> coefficients_;
};

struct InequalityValue {
    std::string name;  ///< inter-1, inter-2, inter-3
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Both sides of the three gradient interpolation inequalities for (g, h) at exponent p,
/// with analytic derivatives sampled at cell centers and midpoint quadrature.
/// Hessian norms are Frobenius norms; n is the grid dimension.
std::array<InequalityValue, 3> evaluate_interpolation_inequalities(const TrigSeries& g, const TrigSeries& h,
                                                                   double p, const Grid& grid);

/// The built-in family. test_id 0: constant g; 1: g = h = cos(pi x / Lx);
/// otherwise randomized coefficients over modes k <= 3, seeded by test_id.
std::pair<TrigSeries, TrigSeries> interpolation_test_pair(int test_id, const Grid& grid);

std::array<InequalityValue, 3> verify_interpolation_inequalities(int test_id, double p, const Grid& grid);

/// Quadrature slack applied to the right-hand sides: 1 + 5h.
double interpolation_tolerance(const Grid& grid) noexcept;

}  // namespace angio
