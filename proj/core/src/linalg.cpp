#include "angio/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "angio/errors.hpp"

namespace angio {

namespace {
double dot(std::span<const double> a, std::span<const double> b) noexcept
{
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}
}  // namespace

void remove_mean(std::span<double> x) noexcept
{
    if (x.empty()) {
        return;
    }
    const double m = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    for (double& v : x) {
        v -= m;
    }
}

CgResult conjugate_gradient(const LinearOperator& apply, std::span<const double> b, std::span<double> x,
                            double rel_tol, int max_iterations, bool zero_mean)
{
    const std::size_t n = b.size();
    std::vector<double> rhs(b.begin(), b.end());
    if (zero_mean) {
        remove_mean(rhs);
        remove_mean(x);
    }
    const double b_norm = std::sqrt(dot(rhs, rhs));
    CgResult result;
    if (b_norm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        result.converged = true;
        return result;
    }

    std::vector<double> r(n), p(n), ap(n);
    auto true_residual = [&] {
        apply(x, ap);
        for (std::size_t i = 0; i < n; ++i) {
            r[i] = rhs[i] - ap[i];
        }
        if (zero_mean) {
            remove_mean(r);
        }
        return std::sqrt(dot(r, r));
    };

    // The recursive residual drifts from the true one near round-off, so each
    // sweep ends with a true-residual check and restarts if it is not yet met.
    double r_norm = true_residual();
    while (result.iterations < max_iterations) {
        if (r_norm <= rel_tol * b_norm) {
            result.converged = true;
            break;
        }
        p = r;
        double rr = dot(r, r);
        const int restart_at = result.iterations;
        while (result.iterations < max_iterations) {
            apply(p, ap);
            if (zero_mean) {
                remove_mean(ap);
            }
            const double pap = dot(p, ap);
            if (!(pap > 0.0)) {
                break;
            }
            const double alpha = rr / pap;
            for (std::size_t i = 0; i < n; ++i) {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            ++result.iterations;
            const double rr_new = dot(r, r);
            if (std::sqrt(rr_new) <= 0.5 * rel_tol * b_norm) {
                break;
            }
            const double beta = rr_new / rr;
            rr = rr_new;
            for (std::size_t i = 0; i < n; ++i) {
                p[i] = r[i] + beta * p[i];
            }
        }
        if (zero_mean) {
            remove_mean(x);
        }
        const double previous = r_norm;
        r_norm = true_residual();
        if (result.iterations == restart_at || (r_norm > rel_tol * b_norm && r_norm >= previous)) {
            // No progress possible from here (breakdown or stagnation at round-off).
            break;
        }
    }
    result.relative_residual = r_norm / b_norm;
    result.converged = result.relative_residual <= rel_tol;
    return result;
}

void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag, std::span<const double> upper,
                       std::span<const double> rhs, std::span<double> x)
{
    const std::size_t n = diag.size();
    if (lower.size() != n || upper.size() != n || rhs.size() != n || x.size() != n) {
        throw InvalidArgument("tridiagonal solve: inconsistent sizes");
    }
    std::vector<double> c(n), d(n);
    double denom = diag[0];
    if (denom == 0.0) {
        throw Error("tridiagonal solve: zero pivot");
    }
    c[0] = upper[0] / denom;
    d[0] = rhs[0] / denom;
    for (std::size_t i = 1; i < n; ++i) {
        denom = diag[i] - lower[i] * c[i - 1];
        if (denom == 0.0) {
            throw Error("tridiagonal solve: zero pivot");
        }
        c[i] = i + 1 < n ? upper[i] / denom : 0.0;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / denom;
    }
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] = d[i] - c[i] * x[i + 1];
    }
}

}  // namespace angio
