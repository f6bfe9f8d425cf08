#pragma once

#include <string>
#include <vector>

#include "angio/grid.hpp"

namespace angio {

/// Parameters of the chemotaxis-convection system
///   u_t = lap u - chi div(u grad v) + xi1 div(u grad w) + u (a - mu u^theta)
///   v_t = d lap v + xi2 div(v grad w) + u - v
///   0   = lap w + u - mean(u),  int w = 0
/// with zero-flux boundaries.
struct ModelParams {
    double chi = 0.0;
    double xi1 = 1.0;
    double xi2 = 1.0;
    double d = 1.0;
    double a = 0.0;
    double mu = 0.0;
    double theta = 1.0;
    int n_dim = 1;  ///< dimension substituted into the structural formulas

    /// Throws InvalidArgument on d <= 0, theta <= 0 or a negative coefficient.
    void validate() const;

    /// xi1 or xi2 vanish: allowed for oracle runs, outside the theorem hypotheses.
    bool off_regime() const noexcept { return xi1 == 0.0 || xi2 == 0.0; }
    bool logistic() const noexcept { return a > 0.0 && mu > 0.0; }
    /// (a / mu)^{1 / theta}; requires logistic().
    double carrying_capacity() const;
};

/// Solution triple at one instant. w always solves the elliptic constraint for u.
struct SimState {
    double t = 0.0;
    Field u;
    Field v;
    Field w;
    double elliptic_residual = 0.0;
};

/// Scalars sampled along a trajectory.
struct DiagnosticsRecord {
    double t = 0.0;
    double mass_u = 0.0;
    double mass_v = 0.0;
    double linf_u = 0.0;
    double linf_v = 0.0;
    double l2_u_dev = 0.0;  ///< ||u - ref||_2 with ref = b for logistic runs, mean(u0) otherwise
    double l2_v_dev = 0.0;
    double l2_grad_v = 0.0;
    double linf_grad_w = 0.0;
    double F1 = 0.0;
    double F2 = 0.0;  ///< NaN unless a > 0 and mu > 0
    double elliptic_residual = 0.0;
    double min_u = 0.0;
    double min_v = 0.0;

    // Not part of the CSV schema.
    double power_mass_u = 0.0;  ///< int u^{theta+1}
    double entropy_lower_gap = 0.0;
    double entropy_upper_gap = 0.0;
    double l1_u_dev = 0.0;

    /// Finiteness of every always-defined field (F2 excluded).
    bool finite() const noexcept;
};

enum class TerminationReason { completed, blowup_detected, step_failure };

std::string to_string(TerminationReason reason);

struct Trajectory {
    std::vector<DiagnosticsRecord> records;
    SimState terminal;
    TerminationReason reason = TerminationReason::completed;
    std::string message;
    double dt = 0.0;
    int record_every = 1;
    double reference_level = 0.0;  ///< the ref used for l2_u_dev / l2_v_dev
    long steps = 0;
};

}  // namespace angio
