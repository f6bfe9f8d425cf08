#pragma once

#include <string>
#include <vector>

#include "angio/model.hpp"

namespace angio {

/// Multipliers whose existence is proven but whose values are never pinned.
/// They only rescale the structural bounds; defaults are 1.
struct GenericConstants {
    double K1 = 1.0;
    double K2 = 1.0;
    double C0 = 1.0;
    double c13 = 1.0;
    double xi0 = 1.0;  ///< stand-in for the convection threshold of regime R1
    double mu0 = 1.0;  ///< stand-in for the logistic threshold of regime R2

    void validate() const;
};

/// L1 ceiling of u: the initial mass when mu = 0 and a = 0, otherwise
/// m0 + (1+a)^{(1+theta)/theta} mu^{-1/theta} (2/(theta+1))^{1/theta} theta/(theta+1) |Omega|.
/// With a > 0 and mu = 0 the mass grows without bound and +inf is returned.
double compute_m1(double u0_mass, const ModelParams& p, double omega_measure);

/// Structural sup-norm bound for v (two branches, mu = 0 and mu > 0). Throws for xi2 = 0.
double structural_M0(const ModelParams& p, const GenericConstants& g);

/// The branch selector of the structural gradient bound.
enum class GradwBranch { convection, logistic_linear, logistic_superlinear };

std::string to_string(GradwBranch branch);

/// M_mu(theta) = (1 + xi1 mu^{-1/theta} + mu^{-1/theta}) mu^{-(n+1)/theta}.
double logistic_bound_factor(const ModelParams& p, double theta);

/// Picks the applicable branch; throws InvalidArgument naming the unmet condition when none applies.
GradwBranch gradw_branch(const ModelParams& p, const GenericConstants& g);

/// The branch value M1^c(n).
double branch_constant(const ModelParams& p, double M0, const GenericConstants& g);

/// K2 (1 + (1 + d_Omega M0^{2(n+1)}) chi^2 M0^{1-n} / d + M1^c)^{1/(n+1)}, d_Omega = 0 on convex domains, d otherwise.
double structural_gradw_bound(const ModelParams& p, double M0, bool convex, const GenericConstants& g);

/// Lambda(z) = (d chi^2 + d^2 Cp^2 xi1^2 + Cp^2 xi2^2 z) / (2 d^2 a^{(theta-2)/theta}). Throws for a = 0.
double lambda_of_z(const ModelParams& p, double cp, double z);

struct MuThreshold {
    double value = 0.0;        ///< Lambda(M0^2)^{theta/2}
    double measured_M0 = 0.0;  ///< sup over records of ||v||_inf
    bool passes = false;       ///< mu > value
};

/// The logistic-strength condition with M0 measured along the trajectory.
/// Requires a > 0, mu > 0, theta >= 1 and at least one record.
MuThreshold empirical_mu_threshold(const Trajectory& traj, const ModelParams& p, double cp);

struct D0Check {
    double A = 0.0;  ///< sup over records of ||v||_inf
    double B = 0.0;  ///< sup over records of ||grad w||_inf
    double check_value = 0.0;
    double epsilon1 = 0.0;
    bool passes = false;
};

/// (d - (2 + A xi2)^2 chi / (4 xi1) - B^2 xi2^2 / 4) chi >= 0 with A, B measured along the trajectory.
D0Check evaluate_d0_check(double A, double B, const ModelParams& p);
D0Check empirical_d0_check(const Trajectory& traj, const ModelParams& p);

/// The bracket mu - ((1 + Cp^2 xi2^2 M0^2 / d) chi^2 / d + Cp^2 xi1^2) / (2 b^{theta-2}).
double sigma_bracket(const ModelParams& p, double cp, double M0);

/// sigma = min(1, b^theta * bracket). Throws InvalidArgument when the bracket is not positive.
double sigma_rate(const ModelParams& p, double cp, double M0);

enum class Regime { R1, R2, R3, open };

std::string to_string(Regime regime);

struct RegimeClassification {
    Regime regime = Regime::open;
    bool convection_condition = false;  ///< xi1 >= xi0 chi^2
    bool linear_logistic_condition = false;  ///< theta = 1, mu >= max(1, chi^{e1}) mu0 chi^{e2}
    bool superlinear_condition = false;  ///< theta > 1, mu > 0
    double exponent_outer = 0.0;  ///< (8 + 2n) / (5 + n)
    double exponent_inner = 0.0;  ///< 2 / (5 + n)
    double mu_required = 0.0;     ///< max(1, chi^{e1}) mu0 chi^{e2}
};

/// Classifies into the boundedness regimes; R3 takes precedence over R2 over R1.
RegimeClassification condition_presets(const ModelParams& p, const GenericConstants& g);

/// Everything the formula layer can say about one run. Undefined entries are NaN.
struct ThresholdReport {
    double m1 = 0.0;
    double M0 = 0.0;
    double gradw_bound = 0.0;
    double M1c = 0.0;
    double M_mu = 0.0;
    double lambda_of_z = 0.0;
    double mu_threshold = 0.0;
    double empirical_A = 0.0;
    double empirical_B = 0.0;
    double d0_check_value = 0.0;
    double epsilon1 = 0.0;
    double sigma = 0.0;
    double b = 0.0;

    double cp = 0.0;
    double u0_mass = 0.0;
    std::string regime;
    std::string gradw_branch;
    bool d0_check_passes = false;
    bool mu_threshold_passes = false;
    std::vector<std::string> notes;
};

/// Evaluates every formula that applies to the parameters and the measured trajectory.
ThresholdReport build_threshold_report(const Trajectory& traj, const ModelParams& p, const Grid& grid, double cp,
                                       const GenericConstants& g);

/// key=value lines; measured quantities are labelled as such.
std::string to_key_value(const ThresholdReport& report);
std::string threshold_csv_header();
std::string threshold_csv_row(const ThresholdReport& report);

}  // namespace angio
