#pragma once

#include <functional>
#include <span>

namespace angio {

/// y = A x for a symmetric operator on flat cell arrays.
using LinearOperator = std::function<void(std::span<const double> x, std::span<double> y)>;

struct CgResult {
    int iterations = 0;
    double relative_residual = 0.0;  ///< ||b - A x|| / ||b|| measured on the true residual
    bool converged = false;
};

/// Conjugate gradients for symmetric (semi)definite A, starting from the contents of x.
///
/// With zero_mean set, b, the iterate and every residual are projected onto
/// the mean-free subspace, which turns the singular Neumann operator into a
/// definite one there. Stops once the true relative residual is <= rel_tol.
CgResult conjugate_gradient(const LinearOperator& apply, std::span<const double> b, std::span<double> x,
                            double rel_tol, int max_iterations, bool zero_mean);

/// Thomas algorithm for a tridiagonal system. lower[0] and upper[n-1] are ignored.
void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag, std::span<const double> upper,
                       std::span<const double> rhs, std::span<double> x);

void remove_mean(std::span<double> x) noexcept;

}  // namespace angio
