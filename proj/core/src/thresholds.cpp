#include "angio/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "angio/errors.hpp"
#include "angio/grid.hpp"

namespace angio {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double sq(double x) { return x * x; }
}  // namespace

void GenericConstants::validate() const
{
    for (double x : {K1, K2, C0, c13, xi0, mu0}) {
        if (!(x > 0.0)) {
            throw InvalidArgument("generic constants K1, K2, C0, c13, xi0, mu0 must all be > 0");
        }
    }
}

double compute_m1(double u0_mass, const ModelParams& p, double omega_measure)
{
    if (!(u0_mass > 0.0)) {
        throw InvalidArgument("compute_m1 needs a positive initial mass");
    }
    if (p.mu == 0.0) {
        return p.a == 0.0 ? u0_mass : std::numeric_limits<double>::infinity();
    }
    const double th = p.theta;
    return u0_mass + std::pow(1.0 + p.a, (1.0 + th) / th) * std::pow(1.0 / p.mu, 1.0 / th) *
                         std::pow(2.0 / (th + 1.0), 1.0 / th) * (th / (th + 1.0)) * omega_measure;
}

double structural_M0(const ModelParams& p, const GenericConstants& g)
{
    if (!(p.xi2 > 0.0)) {
        throw InvalidArgument("structural M0 needs xi2 > 0 (the bound divides by xi2)");
    }
    const double n = p.n_dim;
    const double inv_d = std::pow(1.0 / p.d, 0.5 * n);
    if (p.mu == 0.0) {
        return g.K1 * (1.0 + 1.0 / p.xi2) * (1.0 + p.xi2 + inv_d * std::pow(p.xi2, 1.0 + 0.5 * n));
    }
    const double s = std::pow(1.0 / p.mu, 1.0 / p.theta);
    return g.K1 * (1.0 + s + 1.0 / p.xi2) * (1.0 + s * p.xi2 + inv_d * std::pow(s * p.xi2, 1.0 + 0.5 * n));
}

std::string to_string(GradwBranch branch)
{
    switch (branch) {
    case GradwBranch::convection:
        return "convection";
    case GradwBranch::logistic_linear:
        return "logistic_linear";
    case GradwBranch::logistic_superlinear:
        return "logistic_superlinear";
    }
    return "unknown";
}

double logistic_bound_factor(const ModelParams& p, double theta)
{
    if (!(p.mu > 0.0)) {
        throw InvalidArgument("M_mu needs mu > 0");
    }
    const double s = std::pow(1.0 / p.mu, 1.0 / theta);
    return (1.0 + p.xi1 * s + s) * std::pow(1.0 / p.mu, (p.n_dim + 1.0) / theta);
}

GradwBranch gradw_branch(const ModelParams& p, const GenericConstants& g)
{
    const double n = p.n_dim;
    if (p.mu == 0.0) {
        if (p.xi1 >= g.xi0 * sq(p.chi)) {
            return GradwBranch::convection;
        }
        throw InvalidArgument("no gradient-bound branch applies: mu = 0 requires xi1 >= xi0 chi^2 (xi1 = " +
                              format_real(p.xi1) + ", xi0 chi^2 = " + format_real(g.xi0 * sq(p.chi)) + ")");
    }
    if (p.theta == 1.0) {
        const double required =
            std::max(1.0, std::pow(p.chi, (8.0 + 2.0 * n) / (5.0 + n))) * g.mu0 * std::pow(p.chi, 2.0 / (5.0 + n));
        if (p.mu > required) {
            return GradwBranch::logistic_linear;
        }
        throw InvalidArgument("no gradient-bound branch applies: theta = 1 requires mu > " + format_real(required));
    }
    if (p.theta > 1.0) {
        return GradwBranch::logistic_superlinear;
    }
    throw InvalidArgument("no gradient-bound branch applies: mu > 0 with theta < 1");
}

double branch_constant(const ModelParams& p, double M0, const GenericConstants& g)
{
    switch (gradw_branch(p, g)) {
    case GradwBranch::convection:
        return p.xi1;
    case GradwBranch::logistic_linear:
        return logistic_bound_factor(p, 1.0);
    case GradwBranch::logistic_superlinear: {
        const double n = p.n_dim;
        const double th = p.theta;
        const double inner = (1.0 + 1.0 / std::pow(p.d, n + 2.0)) * (1.0 + M0 * p.xi2) * M0 * sq(p.chi);
        return logistic_bound_factor(p, th) +
               (th - 1.0) / std::pow(p.mu, (n + 2.0) / (th - 1.0)) * std::pow(inner, (n + 1.0 + th) / (th - 1.0));
    }
    }
    return kNaN;
}

double structural_gradw_bound(const ModelParams& p, double M0, bool convex, const GenericConstants& g)
{
    const double n = p.n_dim;
    const double d_omega = convex ? 0.0 : p.d;
    const double m1c = branch_constant(p, M0, g);
    const double inner =
        1.0 + (1.0 + d_omega * std::pow(M0, 2.0 * (n + 1.0))) / p.d * sq(p.chi) * std::pow(M0, 1.0 - n) + m1c;
    return g.K2 * std::pow(inner, 1.0 / (n + 1.0));
}

double lambda_of_z(const ModelParams& p, double cp, double z)
{
    if (!(p.a > 0.0)) {
        throw InvalidArgument("Lambda needs a > 0 (a^{(theta-2)/theta} degenerates at a = 0)");
    }
    const double num = p.d * sq(p.chi) + sq(p.d) * sq(cp) * sq(p.xi1) + sq(cp) * sq(p.xi2) * z;
    return num / (2.0 * sq(p.d) * std::pow(p.a, (p.theta - 2.0) / p.theta));
}

MuThreshold empirical_mu_threshold(const Trajectory& traj, const ModelParams& p, double cp)
{
    if (traj.records.empty()) {
        throw InvalidArgument("empirical mu threshold needs a non-empty trajectory");
    }
    if (!(p.a > 0.0 && p.mu > 0.0 && p.theta >= 1.0)) {
        throw InvalidArgument("empirical mu threshold needs a > 0, mu > 0 and theta >= 1");
    }
    MuThreshold out;
    for (const auto& r : traj.records) {
        out.measured_M0 = std::max(out.measured_M0, r.linf_v);
    }
    out.value = std::pow(lambda_of_z(p, cp, sq(out.measured_M0)), 0.5 * p.theta);
    out.passes = p.mu > out.value;
    return out;
}

D0Check evaluate_d0_check(double A, double B, const ModelParams& p)
{
    if (!(p.xi1 > 0.0)) {
        throw InvalidArgument("the d0 check divides by xi1; it needs xi1 > 0");
    }
    D0Check out;
    out.A = A;
    out.B = B;
    const double convective = sq(2.0 + A * p.xi2) * p.chi / (4.0 * p.xi1);
    const double margin = p.d - convective - sq(B) * sq(p.xi2) / 4.0;
    out.check_value = margin * p.chi;
    out.passes = out.check_value >= 0.0;
    out.epsilon1 = out.check_value > 0.0 ? 0.5 * margin / (p.d - convective) : 0.0;
    return out;
}

D0Check empirical_d0_check(const Trajectory& traj, const ModelParams& p)
{
    if (traj.records.empty()) {
        throw InvalidArgument("empirical d0 check needs a non-empty trajectory");
    }
    double A = 0.0, B = 0.0;
    for (const auto& r : traj.records) {
        A = std::max(A, r.linf_v);
        B = std::max(B, r.linf_grad_w);
    }
    return evaluate_d0_check(A, B, p);
}

double sigma_bracket(const ModelParams& p, double cp, double M0)
{
    const double b = p.carrying_capacity();
    const double correction =
        ((1.0 + sq(cp) * sq(p.xi2) * sq(M0) / p.d) * sq(p.chi) / p.d + sq(cp) * sq(p.xi1)) /
        (2.0 * std::pow(b, p.theta - 2.0));
    return p.mu - correction;
}

double sigma_rate(const ModelParams& p, double cp, double M0)
{
    if (!(p.a > 0.0 && p.mu > 0.0 && p.theta >= 1.0)) {
        throw InvalidArgument("sigma needs a > 0, mu > 0 and theta >= 1");
    }
    const double bracket = sigma_bracket(p, cp, M0);
    if (!(bracket > 0.0)) {
        throw InvalidArgument("sigma undefined: the logistic bracket is " + format_real(bracket) +
                              " <= 0 (mu below the convergence threshold)");
    }
    return std::min(1.0, std::pow(p.carrying_capacity(), p.theta) * bracket);
}

std::string to_string(Regime regime)
{
    switch (regime) {
    case Regime::R1:
        return "R1";
    case Regime::R2:
        return "R2";
    case Regime::R3:
        return "R3";
    case Regime::open:
        return "open";
    }
    return "unknown";
}

RegimeClassification condition_presets(const ModelParams& p, const GenericConstants& g)
{
    RegimeClassification c;
    const double n = p.n_dim;
    c.exponent_outer = (8.0 + 2.0 * n) / (5.0 + n);
    c.exponent_inner = 2.0 / (5.0 + n);
    c.mu_required = std::max(1.0, std::pow(p.chi, c.exponent_outer)) * g.mu0 * std::pow(p.chi, c.exponent_inner);
    c.convection_condition = p.xi1 >= g.xi0 * sq(p.chi);
    c.linear_logistic_condition = p.theta == 1.0 && p.mu >= c.mu_required;
    c.superlinear_condition = p.theta > 1.0 && p.mu > 0.0;
    if (c.superlinear_condition) {
        c.regime = Regime::R3;
    } else if (c.linear_logistic_condition) {
        c.regime = Regime::R2;
    } else if (c.convection_condition) {
        c.regime = Regime::R1;
    }
    return c;
}

ThresholdReport build_threshold_report(const Trajectory& traj, const ModelParams& p, const Grid& grid, double cp,
                                       const GenericConstants& g)
{
    ThresholdReport r;
    r.cp = cp;
    r.u0_mass = traj.records.empty() ? kNaN : traj.records.front().mass_u;
    r.regime = to_string(condition_presets(p, g).regime);

    auto attempt = [&r](double& slot, auto&& fn) {
        try {
            slot = fn();
        } catch (const InvalidArgument& e) {
            slot = kNaN;
            r.notes.emplace_back(e.what());
        }
    };

    attempt(r.m1, [&] { return compute_m1(r.u0_mass, p, grid.measure()); });
    attempt(r.M0, [&] { return structural_M0(p, g); });
    try {
        r.gradw_branch = to_string(gradw_branch(p, g));
    } catch (const InvalidArgument& e) {
        r.gradw_branch = "none";
    }
    attempt(r.M1c, [&] { return branch_constant(p, r.M0, g); });
    attempt(r.gradw_bound, [&] { return structural_gradw_bound(p, r.M0, grid.convex(), g); });
    r.M_mu = p.mu > 0.0 ? logistic_bound_factor(p, p.theta) : kNaN;
    r.b = p.logistic() ? p.carrying_capacity() : kNaN;

    r.empirical_A = 0.0;
    r.empirical_B = 0.0;
    for (const auto& rec : traj.records) {
        r.empirical_A = std::max(r.empirical_A, rec.linf_v);
        r.empirical_B = std::max(r.empirical_B, rec.linf_grad_w);
    }

    r.d0_check_value = kNaN;
    r.epsilon1 = kNaN;
    if (p.a == 0.0 && p.mu == 0.0 && p.xi1 > 0.0) {
        const D0Check c = evaluate_d0_check(r.empirical_A, r.empirical_B, p);
        r.d0_check_value = c.check_value;
        r.epsilon1 = c.epsilon1;
        r.d0_check_passes = c.passes;
    }

    r.lambda_of_z = kNaN;
    r.mu_threshold = kNaN;
    r.sigma = kNaN;
    if (p.logistic() && p.theta >= 1.0) {
        r.lambda_of_z = lambda_of_z(p, cp, sq(r.empirical_A));
        const MuThreshold m = empirical_mu_threshold(traj, p, cp);
        r.mu_threshold = m.value;
        r.mu_threshold_passes = m.passes;
        attempt(r.sigma, [&] { return sigma_rate(p, cp, r.empirical_A); });
    }
    return r;
}

std::string to_key_value(const ThresholdReport& r)
{
    std::ostringstream os;
    os << "# structural bounds use generic constants (defaults 1); A, B and M0_measured are trajectory maxima\n";
    os << "m1=" << format_real(r.m1) << '\n';
    os << "M0_structural=" << format_real(r.M0) << '\n';
    os << "gradw_branch=" << r.gradw_branch << '\n';
    os << "M1c=" << format_real(r.M1c) << '\n';
    os << "gradw_bound_structural=" << format_real(r.gradw_bound) << '\n';
    os << "M_mu=" << format_real(r.M_mu) << '\n';
    os << "b=" << format_real(r.b) << '\n';
    os << "cp=" << format_real(r.cp) << '\n';
    os << "regime=" << r.regime << '\n';
    os << "empirical_A=" << format_real(r.empirical_A) << '\n';
    os << "empirical_B=" << format_real(r.empirical_B) << '\n';
    os << "d0_check_value=" << format_real(r.d0_check_value) << '\n';
    os << "d0_check=" << (std::isnan(r.d0_check_value) ? "n/a" : (r.d0_check_passes ? "pass" : "fail")) << '\n';
    os << "epsilon1=" << format_real(r.epsilon1) << '\n';
    os << "lambda_of_M0sq=" << format_real(r.lambda_of_z) << '\n';
    os << "mu_threshold=" << format_real(r.mu_threshold) << '\n';
    os << "mu_threshold_check=" << (std::isnan(r.mu_threshold) ? "n/a" : (r.mu_threshold_passes ? "pass" : "fail"))
       << '\n';
    os << "sigma=" << format_real(r.sigma) << '\n';
    for (const auto& note : r.notes) {
        os << "# note: " << note << '\n';
    }
    return os.str();
}

std::string threshold_csv_header()
{
    return "m1,M0,gradw_bound,M1c,M_mu,lambda_of_z,mu_threshold,empirical_A,empirical_B,d0_check_value,epsilon1,"
           "sigma,b,cp,regime,gradw_branch,d0_check_passes,mu_threshold_passes";
}

std::string threshold_csv_row(const ThresholdReport& r)
{
    std::ostringstream os;
    for (double x : {r.m1, r.M0, r.gradw_bound, r.M1c, r.M_mu, r.lambda_of_z, r.mu_threshold, r.empirical_A,
                     r.empirical_B, r.d0_check_value, r.epsilon1, r.sigma, r.b, r.cp}) {
        os << format_real(x) << ',';
    }
    os << r.regime << ',' << r.gradw_branch << ',' << (r.d0_check_passes ? 1 : 0) << ','
       << (r.mu_threshold_passes ? 1 : 0);
    return os.str();
}

}  // namespace angio
