#include "angio/model.hpp"

#include <cmath>

#include "angio/errors.hpp"

namespace angio {

void ModelParams::validate() const
{
    auto nonneg = [](double x, const char* name) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw InvalidArgument(std::string(name) + " must be finite and >= 0 (got " + format_real(x) + ")");
        }
    };
    nonneg(chi, "chi");
    nonneg(xi1, "xi1");
    nonneg(xi2, "xi2");
    nonneg(a, "a");
    nonneg(mu, "mu");
    if (!(d > 0.0) || !std::isfinite(d)) {
        throw InvalidArgument("d must be > 0 (got " + format_real(d) + ")");
    }
    if (!(theta > 0.0) || !std::isfinite(theta)) {
        throw InvalidArgument("theta must be > 0 (got " + format_real(theta) + ")");
    }
    if (n_dim < 1) {
        throw InvalidArgument("n_dim must be >= 1");
    }
}

double ModelParams::carrying_capacity() const
{
    if (!logistic()) {
        throw InvalidArgument("b = (a/mu)^{1/theta} needs a > 0 and mu > 0");
    }
    return std::pow(a / mu, 1.0 / theta);
}

bool DiagnosticsRecord::finite() const noexcept
{
    for (double x : {t, mass_u, mass_v, linf_u, linf_v, l2_u_dev, l2_v_dev, l2_grad_v, linf_grad_w, F1,
                     elliptic_residual, min_u, min_v}) {
        if (!std::isfinite(x)) {
            return false;
        }
    }
    return true;
}

std::string to_string(TerminationReason reason)
{
    switch (reason) {
    case TerminationReason::completed:
        return "completed";
    case TerminationReason::blowup_detected:
        return "blowup_detected";
    case TerminationReason::step_failure:
        return "step_failure";
    }
    return "unknown";
}

}  // namespace angio
