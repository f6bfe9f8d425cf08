#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace angio::harness {

struct VerifyCase {
    std::string test_id;
    double p = 0.0;  ///< exponent for interpolation rows, 0 elsewhere
    std::string inequality;
    double lhs = 0.0;
    double rhs = 0.0;  ///< tolerance already applied
    double margin = 0.0;  ///< rhs - lhs
    bool pass = false;
};

struct VerifyOptions {
    int interpolation_ids = 8;  ///< test ids 0..n-1 per (dimension, p)
    std::vector<double> exponents{1.0, 1.5, 2.0, 3.0};
    int entropy_fields = 1000;
    int poincare_fields = 20;
    std::uint64_t seed = 0;
    /// Debug: halves every right-hand side so the battery must fail.
    bool break_tolerance = false;
};

struct VerifyReport {
    std::vector<VerifyCase> cases;
    bool all_pass = true;

    /// test_id,p,inequality,lhs,rhs,margin,pass
    std::string csv() const;
};

/// Rows the battery produces for these options.
std::size_t expected_case_count(const VerifyOptions& opts);

/// Interpolation inequalities (1D N=512 and 2D 128x128), the entropy sandwich on random
/// positive fields, the discrete Poincare constant and inequality, and elliptic solves
/// against closed-form solutions.
VerifyReport verify_suite(const VerifyOptions& opts = {});

}  // namespace angio::harness
