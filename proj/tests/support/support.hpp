#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "angio/grid.hpp"

namespace angio::testing {

inline constexpr double kPi = std::numbers::pi;

/// Dense matrix of the zero-flux 3/5-point Laplacian, assembled entry by entry
/// from the stencil (each interior face couples its two cells with 1/h^2).
inline Eigen::MatrixXd dense_laplacian(const Grid& g)
{
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    const int nx = g.cells(0);
    const int ny = g.dim() == 2 ? g.cells(1) : 1;
    auto couple = [&](std::size_t p, std::size_t q, double h) {
        const auto ip = static_cast<Eigen::Index>(p), iq = static_cast<Eigen::Index>(q);
        const double c = 1.0 / (h * h);
        a(ip, ip) -= c;
        a(iq, iq) -= c;
        a(ip, iq) += c;
        a(iq, ip) += c;
    };
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            if (i + 1 < nx) couple(g.index(i, j), g.index(i + 1, j), g.spacing(0));
            if (g.dim() == 2 && j + 1 < ny) couple(g.index(i, j), g.index(i, j + 1), g.spacing(1));
        }
    }
    return a;
}

inline Eigen::VectorXd to_eigen(const Field& f)
{
    Eigen::VectorXd v(static_cast<Eigen::Index>(f.size()));
    for (std::size_t i = 0; i < f.size(); ++i) v(static_cast<Eigen::Index>(i)) = f[i];
    return v;
}

inline Field random_field(const Grid& g, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0)
{
    std::uniform_real_distribution<double> dist(lo, hi);
    Field f(g);
    for (double& x : f.values()) x = dist(rng);
    return f;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / ("angio_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace angio::testing
