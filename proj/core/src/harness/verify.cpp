#include "angio/harness/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "angio/elliptic.hpp"
#include "angio/functionals.hpp"
#include "angio/grid.hpp"

namespace angio::harness {

namespace {

constexpr double kPi = std::numbers::pi;

class Battery {
public:
    explicit Battery(bool broken) : scale_(broken ? 0.5 : 1.0) {}

    void add(std::string id, double p, std::string name, double lhs, double rhs)
    {
        VerifyCase c{std::move(id), p, std::move(name), lhs, rhs * scale_, 0.0, false};
        c.margin = c.rhs - c.lhs;
        c.pass = std::isfinite(c.margin) && c.margin >= 0.0;
        report.all_pass = report.all_pass && c.pass;
        report.cases.push_back(std::move(c));
    }

    VerifyReport report;

private:
    double scale_;
};

void interpolation_cases(Battery& b, const VerifyOptions& opts)
{
    const Grid grids[] = {build_grid(1, {1.0}, {512}), build_grid(2, {1.0, 1.0}, {128, 128})};
    for (const Grid& grid : grids) {
        const double tol = interpolation_tolerance(grid);
        for (double p : opts.exponents) {
            for (int id = 0; id < opts.interpolation_ids; ++id) {
                const auto values = verify_interpolation_inequalities(id, p, grid);
                for (const auto& v : values) {
                    b.add("interp-" + std::to_string(grid.dim()) + "d-" + std::to_string(id), p, v.name, v.lhs,
                          v.rhs * tol);
                }
            }
        }
    }
}

void entropy_cases(Battery& b, const VerifyOptions& opts)
{
    std::mt19937_64 rng(opts.seed ^ 0xe17e0b1aULL);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int k = 0; k < opts.entropy_fields; ++k) {
        // Unit-measure domains only: the lower bound as written assumes |Omega| <= 1.
        const Grid grid = k % 2 == 0 ? build_grid(1, {1.0}, {32 + static_cast<int>(unit(rng) * 96)})
                                     : build_grid(2, {1.0, 1.0}, {8 + static_cast<int>(unit(rng) * 16), 16});
        const double spread = std::exp(std::log(1e-3) + unit(rng) * std::log(3e3));  // 1e-3 .. 3
        const double level = std::exp(-3.0 + 6.0 * unit(rng));
        Field u(grid);
        for (double& x : u.values()) {
            x = level * std::exp(spread * normal(rng));
        }
        const double h = relative_entropy(u);
        const EntropyGaps gaps = entropy_sandwich_check(u);
        const double slack = 1e-10 * std::max(1.0, integrate(u));
        const std::string id = "entropy-" + std::to_string(k);
        b.add(id, 0.0, "entropy-lower", h - gaps.lower_gap, h + slack);
        b.add(id, 0.0, "entropy-upper", h, h + gaps.upper_gap + slack);
    }
}

void poincare_cases(Battery& b, const VerifyOptions& opts)
{
    const Grid line = build_grid(1, {1.0}, {256});
    const SpectralInfo s1 = spectral_info(line);
    b.add("poincare-1d", 0.0, "lambda1-rel-error", std::abs(s1.lambda1 - kPi * kPi) / (kPi * kPi), 1e-3);

    const Grid rect = build_grid(2, {1.0, 2.0}, {32, 64});
    const SpectralInfo s2 = spectral_info(rect);
    const double expected = kPi * kPi / 4.0;
    b.add("poincare-2d", 0.0, "lambda1-rel-error", std::abs(s2.lambda1 - expected) / expected, 1e-3);

    std::mt19937_64 rng(opts.seed ^ 0x90c4a7eULL);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int k = 0; k < opts.poincare_fields; ++k) {
        const double c1 = normal(rng), c2 = normal(rng), noise = 0.1 * std::abs(normal(rng));
        Field f = Field::sample(line, [&](double x) { return c1 * std::cos(kPi * x) + c2 * std::cos(2 * kPi * x); });
        for (double& x : f.values()) {
            x += noise * normal(rng);
        }
        f -= mean(f);
        b.add("poincare-field-" + std::to_string(k), 0.0, "poincare", lp_norm(f, 2.0),
              s1.poincare_cp * grad_l2(f) * (1.0 + 1e-9));
    }
}

void elliptic_cases(Battery& b)
{
    const Grid line = build_grid(1, {1.0}, {256});
    const Field u1 = Field::sample(line, [](double x) { return 2.0 + std::cos(kPi * x); });
    const Field w1 = solve_w(u1);
    const Field exact1 = Field::sample(line, [](double x) { return std::cos(kPi * x) / (kPi * kPi); });
    b.add("elliptic-1d", 0.0, "w-rel-linf-error", (w1 - exact1).max_abs() / exact1.max_abs(), 1e-3);

    const Grid square = build_grid(2, {1.0, 1.0}, {64, 64});
    const Field u2 = Field::sample(square, [](double x, double y) { return 2.0 + std::cos(kPi * x) * std::cos(kPi * y); });
    const Field w2 = solve_w(u2);
    const Field exact2 = Field::sample(
        square, [](double x, double y) { return std::cos(kPi * x) * std::cos(kPi * y) / (2.0 * kPi * kPi); });
    b.add("elliptic-2d", 0.0, "w-rel-linf-error", (w2 - exact2).max_abs() / exact2.max_abs(), 1e-3);
}

}  // namespace

std::string VerifyReport::csv() const
{
    std::ostringstream os;
    os << "test_id,p,inequality,lhs,rhs,margin,pass\n";
    for (const auto& c : cases) {
        os << c.test_id << ',' << format_real(c.p) << ',' << c.inequality << ',' << format_real(c.lhs) << ','
           << format_real(c.rhs) << ',' << format_real(c.margin) << ',' << (c.pass ? "pass" : "fail") << '\n';
    }
    return os.str();
}

std::size_t expected_case_count(const VerifyOptions& opts)
{
    const std::size_t interp = 2 * opts.exponents.size() * static_cast<std::size_t>(opts.interpolation_ids) * 3;
    return interp + 2 * static_cast<std::size_t>(opts.entropy_fields) + 2 +
           static_cast<std::size_t>(opts.poincare_fields) + 2;
}

VerifyReport verify_suite(const VerifyOptions& opts)
{
    Battery b(opts.break_tolerance);
    interpolation_cases(b, opts);
    entropy_cases(b, opts);
    poincare_cases(b, opts);
    elliptic_cases(b);
    return std::move(b.report);
}

}  // namespace angio::harness
