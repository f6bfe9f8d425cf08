#include "angio/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "angio/errors.hpp"
#include "angio/linalg.hpp"

namespace angio {

namespace {
constexpr double kResidualFloor = 1e-30;

// u - mean(u) carries a constant of order eps * mean(u) from the rounded mean,
// which swamps the relative residual once u is nearly flat. A second pass removes it.
Field centered(const Field& u)
{
    Field f = u - mean(u);
    f -= mean(f);
    return f;
}

LinearOperator negative_laplacian(const Grid& grid)
{
    return [grid](std::span<const double> x, std::span<double> y) {
        detail::apply_laplacian(grid, x, y);
        for (double& v : y) {
            v = -v;
        }
    };
}

// Modified Gram-Schmidt on the zero-mean subspace.
void orthonormalize_zero_mean(std::vector<std::vector<double>>& vs)
{
    for (std::size_t k = 0; k < vs.size(); ++k) {
        auto& v = vs[k];
        remove_mean(v);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j < k; ++j) {
                double dot = 0.0;
                for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * vs[j][i];
                for (std::size_t i = 0; i < v.size(); ++i) v[i] -= dot * vs[j][i];
            }
        }
        double norm = 0.0;
        for (double e : v) norm += e * e;
        norm = std::sqrt(norm);
        if (!(norm > 0.0)) {
            throw ConvergenceError("spectral_info: iteration block lost rank", 0.0, 0);
        }
        for (double& e : v) e /= norm;
    }
}

// Cyclic Jacobi for a small dense symmetric matrix (row-major, m x m). Returns the
// eigenvalues ascending; column k of `vectors` is the matching eigenvector.
std::vector<double> symmetric_eigen(std::vector<double> a, std::vector<double>& vectors, std::size_t m)
{
    std::vector<double> v(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) v[i * m + i] = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0, scale = 0.0;
        for (std::size_t p = 0; p < m; ++p) {
            scale += a[p * m + p] * a[p * m + p];
            for (std::size_t q = p + 1; q < m; ++q) off += a[p * m + q] * a[p * m + q];
        }
        if (off <= 1e-32 * scale) break;
        for (std::size_t p = 0; p < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                const double apq = a[p * m + q];
                if (apq == 0.0) continue;
                const double tau = (a[q * m + q] - a[p * m + p]) / (2.0 * apq);
                const double t = std::copysign(1.0, tau) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t), s = t * c;
                for (std::size_t k = 0; k < m; ++k) {
                    const double akp = a[k * m + p], akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < m; ++k) {
                    const double apk = a[p * m + k], aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < m; ++k) {
                    const double vkp = v[k * m + p], vkq = v[k * m + q];
                    v[k * m + p] = c * vkp - s * vkq;
                    v[k * m + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x * m + x] < a[y * m + y]; });
    std::vector<double> values(m);
    vectors.assign(m * m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        values[k] = a[order[k] * m + order[k]];
        for (std::size_t i = 0; i < m; ++i) vectors[i * m + k] = v[i * m + order[k]];
    }
    return values;
}
}  // namespace

void EllipticConfig::validate() const
{
    if (!(tolerance > 0.0 && tolerance <= 1e-4)) {
        throw InvalidArgument("elliptic tolerance must lie in (0, 1e-4], got " + format_real(tolerance));
    }
    if (max_iterations < 0) {
        throw InvalidArgument("elliptic max_iterations must be >= 1 (or 0 for the default)");
    }
}

int EllipticConfig::iteration_cap(const Grid& grid) const noexcept
{
    return max_iterations > 0 ? max_iterations : static_cast<int>(10 * grid.size());
}

double elliptic_residual(const Field& w, const Field& u)
{
    Field source = centered(u);
    Field r = laplacian(w);
    r += source;
    return lp_norm(r, 2.0) / std::max(lp_norm(source, 2.0), kResidualFloor);
}

EllipticSolution solve_w_detailed(const Field& u, const EllipticConfig& cfg, const Field& initial_guess)
{
    cfg.validate();
    const Grid& grid = u.grid();
    if (!(initial_guess.grid() == grid)) {
        throw InvalidArgument("solve_w: initial guess lives on a different grid");
    }
    if (!u.all_finite()) {
        throw InvalidArgument("solve_w: source field has non-finite values");
    }
    Field source = centered(u);
    Field w = initial_guess;
    // CG works in the plain Euclidean product; with uniform cells it is a
    // constant multiple of the quadrature product, so the tolerance carries over.
    const double cg_tol = 0.25 * cfg.tolerance;
    const CgResult cg = conjugate_gradient(negative_laplacian(grid), source.values(), w.values(), cg_tol,
                                           cfg.iteration_cap(grid), true);
    remove_mean(w.values());
    const double residual = elliptic_residual(w, u);
    if (!(residual <= cfg.tolerance)) {
        throw ConvergenceError("elliptic solve did not reach tolerance " + format_real(cfg.tolerance) +
                                   " (achieved " + format_real(residual) + " after " +
                                   std::to_string(cg.iterations) + " iterations)",
                               residual, cg.iterations);
    }
    return {std::move(w), residual, cg.iterations};
}

EllipticSolution solve_w_detailed(const Field& u, const EllipticConfig& cfg)
{
    return solve_w_detailed(u, cfg, Field(u.grid()));
}

Field solve_w(const Field& u, const EllipticConfig& cfg) { return solve_w_detailed(u, cfg).w; }

SpectralInfo spectral_info(const Grid& grid, const EllipticConfig& cfg)
{
    cfg.validate();
    const auto op = negative_laplacian(grid);
    const int inner_cap = cfg.iteration_cap(grid);
    constexpr int kMaxOuter = 500;
    constexpr double kRelativeChange = 1e-12;

    // Block inverse iteration with a Rayleigh-Ritz step. A single vector stalls when the
    // two lowest modes are (nearly) degenerate, as on squares and near-square grids.
    const std::size_t n = grid.size();
    const std::size_t m = std::min<std::size_t>(4, n - 1);
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<std::vector<double>> block(m, std::vector<double>(n));
    for (auto& x : block) {
        for (double& v : x) v = dist(rng);
    }
    orthonormalize_zero_mean(block);

    std::vector<std::vector<double>> solved(m, std::vector<double>(n)), applied(m, std::vector<double>(n));
    std::vector<double> ritz(m * m), vectors(m * m);
    double lambda = 0.0;
    for (int it = 1; it <= kMaxOuter; ++it) {
        for (std::size_t k = 0; k < m; ++k) {
            std::fill(solved[k].begin(), solved[k].end(), 0.0);
            const CgResult cg =
                conjugate_gradient(op, block[k], solved[k], std::min(cfg.tolerance, 1e-12), inner_cap, true);
            if (!cg.converged && cg.relative_residual > 1e-8) {
                throw ConvergenceError("spectral_info: inner solve stalled at residual " +
                                           format_real(cg.relative_residual),
                                       cg.relative_residual, it);
            }
        }
        orthonormalize_zero_mean(solved);
        for (std::size_t k = 0; k < m; ++k) op(solved[k], applied[k]);
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = 0; b < m; ++b) {
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i) s += solved[a][i] * applied[b][i];
                ritz[a * m + b] = s;
            }
        }
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = 0; b < a; ++b) ritz[a * m + b] = ritz[b * m + a] = 0.5 * (ritz[a * m + b] + ritz[b * m + a]);
        }
        const std::vector<double> values = symmetric_eigen(ritz, vectors, m);
        for (std::size_t k = 0; k < m; ++k) {
            std::fill(block[k].begin(), block[k].end(), 0.0);
            for (std::size_t j = 0; j < m; ++j) {
                const double c = vectors[j * m + k];
                for (std::size_t i = 0; i < n; ++i) block[k][i] += c * solved[j][i];
            }
        }
        const double rq = values[0];
        if (it > 1 && std::abs(rq - lambda) <= kRelativeChange * rq) {
            return {rq, 1.0 / std::sqrt(rq), it};
        }
        lambda = rq;
    }
    throw ConvergenceError("spectral_info: inverse iteration did not settle in " + std::to_string(kMaxOuter) +
                               " sweeps",
                           lambda, kMaxOuter);
}

}  // namespace angio
