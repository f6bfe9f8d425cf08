#include "angio/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "angio/errors.hpp"

namespace angio {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// r ln r - r + 1 at r = 1 + e.
double entropy_density(double e)
{
    if (std::abs(e) < 1e-2) {
        double term = e * e;
        double sum = 0.0;
        for (int k = 2; k <= 12; ++k) {
            sum += term / (k * (k - 1.0));
            term *= -e;
        }
        return sum;
    }
    return (1.0 + e) * std::log1p(e) - e;
}

// r - 1 - ln r at r = 1 + e.
double boltzmann_density(double e)
{
    if (std::abs(e) < 1e-2) {
        double term = e * e;
        double sum = 0.0;
        for (int k = 2; k <= 12; ++k) {
            sum += term / k;
            term *= -e;
        }
        return sum;
    }
    return e - std::log1p(e);
}

void require_positive(const Field& u, const char* who)
{
    for (double x : u.values()) {
        if (!(x > 0.0)) {
            throw InvalidArgument(std::string(who) + ": field must be positive in every cell (found " +
                                  format_real(x) + ")");
        }
    }
}
}  // namespace

double relative_entropy(const Field& u)
{
    require_positive(u, "relative_entropy");
    const double m = mean(u);
    double sum = 0.0;
    for (double x : u.values()) {
        sum += entropy_density((x - m) / m);
    }
    return m * sum * u.grid().cell_volume();
}

EntropyGaps entropy_sandwich_check(const Field& u)
{
    const double h = relative_entropy(u);
    const double m = mean(u);
    const Field dev = u - m;
    const double l1 = lp_norm(dev, 1.0);
    const double l2 = lp_norm(dev, 2.0);
    return {h - l1 * l1 / (2.0 * m), l2 * l2 / m - h};
}

double grad_l2(const Field& f) { return std::sqrt(face_l2_squared(gradient_faces(f))); }

double lyap_F1(const SimState& state, double chi)
{
    const double g = grad_l2(state.v);
    return relative_entropy(state.u) + 0.5 * chi * g * g;
}

double lyap_F2(const SimState& state, const ModelParams& params)
{
    if (!(params.a > 0.0 && params.mu > 0.0)) {
        throw InvalidArgument("F2 needs a > 0 and mu > 0 (b = (a/mu)^{1/theta} degenerates otherwise)");
    }
    require_positive(state.u, "lyap_F2");
    const double b = params.carrying_capacity();
    double boltzmann = 0.0;
    for (double x : state.u.values()) {
        boltzmann += boltzmann_density((x - b) / b);
    }
    boltzmann *= b * state.u.grid().cell_volume();
    const double vdev = lp_norm(state.v - b, 2.0);
    return boltzmann + b * params.chi * params.chi / (2.0 * params.d) * vdev * vdev;
}

DiagnosticsRecord diagnose(const SimState& state, const ModelParams& params, double reference)
{
    DiagnosticsRecord r;
    r.t = state.t;
    r.mass_u = integrate(state.u);
    r.mass_v = integrate(state.v);
    r.linf_u = state.u.max_abs();
    r.linf_v = state.v.max_abs();
    const Field udev = state.u - reference;
    r.l2_u_dev = lp_norm(udev, 2.0);
    r.l1_u_dev = lp_norm(udev, 1.0);
    r.l2_v_dev = lp_norm(state.v - reference, 2.0);
    r.l2_grad_v = grad_l2(state.v);
    r.linf_grad_w = face_linf(gradient_faces(state.w));
    r.elliptic_residual = state.elliptic_residual;
    r.min_u = state.u.min();
    r.min_v = state.v.min();

    double power = 0.0;
    for (double x : state.u.values()) {
        power += std::pow(std::max(x, 0.0), params.theta + 1.0);
    }
    r.power_mass_u = power * state.u.grid().cell_volume();

    const bool positive = r.min_u > 0.0 && state.u.all_finite();
    if (positive) {
        r.F1 = lyap_F1(state, params.chi);
        const EntropyGaps gaps = entropy_sandwich_check(state.u);
        r.entropy_lower_gap = gaps.lower_gap;
        r.entropy_upper_gap = gaps.upper_gap;
        r.F2 = params.logistic() ? lyap_F2(state, params) : kNaN;
    } else {
        r.F1 = kNaN;
        r.F2 = kNaN;
        r.entropy_lower_gap = kNaN;
        r.entropy_upper_gap = kNaN;
    }
    return r;
}

double mass_balance_residual(const Trajectory& traj, const ModelParams& params)
{
    double worst = 0.0;
    const auto& rec = traj.records;
    for (std::size_t k = 0; k + 1 < rec.size(); ++k) {
        const double dt = rec[k + 1].t - rec[k].t;
        const double predicted = dt * (params.a * rec[k].mass_u - params.mu * rec[k].power_mass_u);
        worst = std::max(worst, std::abs(rec[k + 1].mass_u - rec[k].mass_u - predicted));
    }
    return worst;
}

RateFit fit_decay_rate(std::span<const double> t, std::span<const double> values, DecayWindow window)
{
    if (t.size() != values.size()) {
        throw InvalidArgument("fit_decay_rate: time and value series differ in length");
    }
    if (!(window.t1 > window.t0)) {
        throw InvalidArgument("fit_decay_rate: window end must exceed window start");
    }
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < window.t0 || t[i] > window.t1) {
            continue;
        }
        if (!(values[i] > 0.0)) {
            throw InvalidArgument("fit_decay_rate: nonpositive value " + format_real(values[i]) + " at t=" +
                                  format_real(t[i]) + "; shrink the window");
        }
        xs.push_back(t[i]);
        ys.push_back(std::log(values[i]));
    }
    if (xs.size() < 10) {
        throw InvalidArgument("fit_decay_rate: need at least 10 samples in [" + format_real(window.t0) + ", " +
                              format_real(window.t1) + "], found " + std::to_string(xs.size()));
    }
    const double n = static_cast<double>(xs.size());
    double xm = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xm += xs[i];
        ym += ys[i];
    }
    xm /= n;
    ym /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - xm;
        const double dy = ys[i] - ym;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    RateFit fit;
    fit.window_start = window.t0;
    fit.window_end = window.t1;
    fit.samples = static_cast<int>(xs.size());
    const double slope = sxy / sxx;
    fit.rate = 0.0 - slope;  // no "-0" for a flat series
    fit.intercept = ym - slope * xm;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (fit.intercept + slope * xs[i]);
        ss_res += e * e;
    }
    // A flat series is fit exactly by slope 0.
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return fit;
}

DecayWindow default_window(std::span<const double> t)
{
    if (t.empty()) {
        throw InvalidArgument("default_window: empty series");
    }
    const double t0 = t.front();
    const double t1 = t.back();
    return {t0 + 0.5 * (t1 - t0), t1};
}

DecayWindow signal_window(std::span<const double> t, std::span<const double> values, double floor_ratio)
{
    if (t.empty() || t.size() != values.size()) {
        throw InvalidArgument("signal_window: empty or mismatched series");
    }
    double peak = 0.0;
    for (double v : values) {
        if (std::isfinite(v)) peak = std::max(peak, v);
    }
    std::size_t last = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] > floor_ratio * peak) {
            last = i;
        } else {
            break;
        }
    }
    const double t0 = t.front();
    const double t1 = t[last];
    return {t0 + 0.5 * (t1 - t0), t1};
}

TrigSeries::TrigSeries(int dim, std::array<double, 2> lengths, int modes, std::vector<double> coefficients)
    : dim_(dim), lengths_(lengths), modes_(modes), coefficients_(std::move(coefficients))
{
    const std::size_t expected = dim == 1 ? static_cast<std::size_t>(modes)
                                          : static_cast<std::size_t>(modes) * static_cast<std::size_t>(modes);
    if ((dim != 1 && dim != 2) || modes < 1 || coefficients_.size() != expected) {
        throw InvalidArgument("TrigSeries: inconsistent dimension, mode count or coefficient count");
    }
}

TrigSeries TrigSeries::constant(const Grid& grid, double value)
{
    return TrigSeries(grid.dim(), {grid.length(0), grid.dim() == 2 ? grid.length(1) : 1.0}, 1, {value});
}

TrigSeries TrigSeries::cosine(const Grid& grid, int mode_x, int mode_y, double amplitude)
{
    const int modes = std::max(mode_x, mode_y) + 1;
    std::vector<double> c(grid.dim() == 1 ? modes : modes * modes, 0.0);
    c[grid.dim() == 1 ? mode_x : mode_x * modes + mode_y] = amplitude;
    return TrigSeries(grid.dim(), {grid.length(0), grid.dim() == 2 ? grid.length(1) : 1.0}, modes, std::move(c));
}

TrigSeries::Jet TrigSeries::evaluate(double x, double y) const
{
    constexpr double pi = std::numbers::pi;
    Jet jet;
    auto basis = [&](int k, double s, double len, double& f, double& df, double& d2f) {
        const double w = k * pi / len;
        const double c = std::cos(w * s);
        f = c;
        df = -w * std::sin(w * s);
        d2f = -w * w * c;
    };
    if (dim_ == 1) {
        for (int k = 0; k < modes_; ++k) {
            double f, df, d2f;
            basis(k, x, lengths_[0], f, df, d2f);
            const double c = coefficients_[static_cast<std::size_t>(k)];
            jet.value += c * f;
            jet.gradient[0] += c * df;
            jet.hessian[0][0] += c * d2f;
        }
        return jet;
    }
    for (int k = 0; k < modes_; ++k) {
        double fx, dfx, d2fx;
        basis(k, x, lengths_[0], fx, dfx, d2fx);
        for (int l = 0; l < modes_; ++l) {
            double fy, dfy, d2fy;
            basis(l, y, lengths_[1], fy, dfy, d2fy);
            const double c = coefficients_[static_cast<std::size_t>(k * modes_ + l)];
            jet.value += c * fx * fy;
            jet.gradient[0] += c * dfx * fy;
            jet.gradient[1] += c * fx * dfy;
            jet.hessian[0][0] += c * d2fx * fy;
            jet.hessian[1][1] += c * fx * d2fy;
            jet.hessian[0][1] += c * dfx * dfy;
        }
    }
    jet.hessian[1][0] = jet.hessian[0][1];
    return jet;
}

std::array<InequalityValue, 3> evaluate_interpolation_inequalities(const TrigSeries& g, const TrigSeries& h,
                                                                   double p, const Grid& grid)
{
    if (!(p >= 1.0 && p <= 4.0)) {
        throw InvalidArgument("interpolation inequalities: p must lie in [1, 4], got " + format_real(p));
    }
    if (g.dim() != grid.dim() || h.dim() != grid.dim()) {
        throw InvalidArgument("interpolation inequalities: test function dimension differs from grid");
    }
    const int n = grid.dim();
    double lhs1 = 0.0, lhs2 = 0.0;
    double grad_pow = 0.0;      // int |grad g|^{2(p+1)}
    double hess_h_pow = 0.0;    // int |D^2 h|^{p+1}
    double lap_h_pow = 0.0;     // int |lap h|^{p+1}
    double weighted_hess = 0.0; // int |grad g|^{2p-2} |D^2 g|^2
    double g_sup = 0.0;

    for (std::size_t c = 0; c < grid.size(); ++c) {
        const auto [i, j] = grid.coords(c);
        const double x = grid.center(0, i);
        const double y = n == 2 ? grid.center(1, j) : 0.0;
        const TrigSeries::Jet gj = g.evaluate(x, y);
        const TrigSeries::Jet hj = h.evaluate(x, y);

        double ng2 = 0.0, lap_g = 0.0, lap_h = 0.0, hg_frob2 = 0.0, hh_frob2 = 0.0, g_hess_g = 0.0, mixed = 0.0;
        for (int a = 0; a < n; ++a) {
            ng2 += gj.gradient[a] * gj.gradient[a];
            lap_g += gj.hessian[a][a];
            lap_h += hj.hessian[a][a];
            double row = 0.0;  // (D^2 g grad h + D^2 h grad g)_a
            for (int b = 0; b < n; ++b) {
                hg_frob2 += gj.hessian[a][b] * gj.hessian[a][b];
                hh_frob2 += hj.hessian[a][b] * hj.hessian[a][b];
                g_hess_g += gj.gradient[a] * gj.hessian[a][b] * gj.gradient[b];
                row += gj.hessian[a][b] * hj.gradient[b] + hj.hessian[a][b] * gj.gradient[b];
            }
            mixed += gj.gradient[a] * row;
        }
        const double ng = std::sqrt(ng2);
        const double w = std::pow(ng, 2.0 * p - 2.0);
        // div(|grad g|^{2p-2} grad g); the second term is O(|grad g|^{2p-2}) and vanishes with the gradient.
        double div_flux = 0.0;
        if (ng > 0.0) {
            div_flux = w * lap_g + (2.0 * p - 2.0) * std::pow(ng, 2.0 * p - 4.0) * g_hess_g;
        } else if (p == 1.0) {
            div_flux = lap_g;
        }

        lhs1 += w * mixed;
        lhs2 += gj.value * lap_h * div_flux;
        grad_pow += std::pow(ng, 2.0 * (p + 1.0));
        hess_h_pow += std::pow(std::sqrt(hh_frob2), p + 1.0);
        lap_h_pow += std::pow(std::abs(lap_h), p + 1.0);
        weighted_hess += w * hg_frob2;
        g_sup = std::max(g_sup, std::abs(gj.value));
    }
    const double vol = grid.cell_volume();
    lhs1 = std::abs(lhs1 * vol);
    lhs2 = std::abs(lhs2 * vol);
    grad_pow *= vol;
    hess_h_pow *= vol;
    lap_h_pow *= vol;
    weighted_hess *= vol;

    const double sqrt_n = std::sqrt(static_cast<double>(n));
    const double rhs1 = (sqrt_n / (2.0 * p) + 1.0) * std::pow(grad_pow, p / (p + 1.0)) *
                        std::pow(hess_h_pow, 1.0 / (p + 1.0));
    const double rhs2 = (2.0 * (p - 1.0) + sqrt_n) * g_sup * std::pow(grad_pow, (p - 1.0) / (2.0 * (p + 1.0))) *
                        std::pow(lap_h_pow, 1.0 / (p + 1.0)) * std::sqrt(weighted_hess);
    const double k3 = 2.0 * p + sqrt_n;
    const double rhs3 = k3 * k3 * g_sup * g_sup * weighted_hess;
    return {{{"inter-1", lhs1, rhs1}, {"inter-2", lhs2, rhs2}, {"inter-3", grad_pow, rhs3}}};
}

std::pair<TrigSeries, TrigSeries> interpolation_test_pair(int test_id, const Grid& grid)
{
    if (test_id < 0) {
        throw InvalidArgument("interpolation test ids start at 0");
    }
    if (test_id == 0) {
        return {TrigSeries::constant(grid, 1.5), TrigSeries::cosine(grid, 1)};
    }
    if (test_id == 1) {
        return {TrigSeries::cosine(grid, 1), TrigSeries::cosine(grid, 1)};
    }
    constexpr int kModes = 4;
    std::mt19937_64 rng(0x1a7e4b00ULL + static_cast<std::uint64_t>(test_id));
    std::normal_distribution<double> dist(0.0, 1.0);
    const std::size_t count = grid.dim() == 1 ? kModes : kModes * kModes;
    auto draw = [&] {
        std::vector<double> c(count);
        for (double& x : c) x = dist(rng);
        return TrigSeries(grid.dim(), {grid.length(0), grid.dim() == 2 ? grid.length(1) : 1.0}, kModes, c);
    };
    TrigSeries g = draw();
    TrigSeries h = draw();
    return {std::move(g), std::move(h)};
}

std::array<InequalityValue, 3> verify_interpolation_inequalities(int test_id, double p, const Grid& grid)
{
    const auto [g, h] = interpolation_test_pair(test_id, grid);
    return evaluate_interpolation_inequalities(g, h, p, grid);
}

double interpolation_tolerance(const Grid& grid) noexcept { return 1.0 + 5.0 * grid.max_spacing(); }

}  // namespace angio
