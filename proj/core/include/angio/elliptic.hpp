#pragma once

#include "angio/grid.hpp"

namespace angio {

struct EllipticConfig {
    double tolerance = 1e-10;  ///< relative residual target, in (0, 1e-4]
    int max_iterations = 0;    ///< 0 selects 10 * (total cells)

    void validate() const;
    int iteration_cap(const Grid& grid) const noexcept;
};

struct SpectralInfo {
    double lambda1 = 0.0;      ///< first nonzero Neumann eigenvalue of -laplacian
    double poincare_cp = 0.0;  ///< lambda1^{-1/2}
    int iterations = 0;
};

struct EllipticSolution {
    Field w;
    double residual = 0.0;  ///< relative residual, see elliptic_residual()
    int iterations = 0;
};

/// ||lap w + u - mean(u)||_2 / max(||u - mean(u)||_2, 1e-30).
double elliptic_residual(const Field& w, const Field& u);

/// Solves -lap w = u - mean(u) with int w = 0 by mean-projected CG.
/// Throws ConvergenceError (carrying the achieved residual) if the target is not reached.
EllipticSolution solve_w_detailed(const Field& u, const EllipticConfig& cfg);
/// Same, warm-started from a previous solution on the same grid.
EllipticSolution solve_w_detailed(const Field& u, const EllipticConfig& cfg, const Field& initial_guess);

Field solve_w(const Field& u, const EllipticConfig& cfg = {});

/// Inverse power iteration on the zero-mean subspace of the discrete Neumann Laplacian.
SpectralInfo spectral_info(const Grid& grid, const EllipticConfig& cfg = {});

}  // namespace angio
