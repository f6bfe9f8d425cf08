#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace angio {

/// Uniform cell-centered tensor grid on [0, L_x] (x [0, L_y]).
///
/// Cells are stored row-major with axis 0 slowest: in 2D the flat index of
/// cell (i, j) is i * cells(1) + j. Only intervals and rectangles exist, so
/// the convexity flag defaults to true; it can be overridden to evaluate
/// structural bounds as if the domain were non-convex.
class Grid {
public:
    /// Validating constructor. dim in {1, 2}, positive lengths, at least 4 cells per axis.
    Grid(int dim, std::span<const double> lengths, std::span<const int> cells);

    int dim() const noexcept { return dim_; }
    double length(int axis) const { return lengths_.at(static_cast<std::size_t>(axis)); }
    int cells(int axis) const { return cells_.at(static_cast<std::size_t>(axis)); }
    double spacing(int axis) const { return spacing_.at(static_cast<std::size_t>(axis)); }
    double measure() const noexcept { return measure_; }
    double cell_volume() const noexcept { return cell_volume_; }
    bool convex() const noexcept { return convex_; }
    std::size_t size() const noexcept { return size_; }

    /// Largest spacing over the active axes.
    double max_spacing() const noexcept;

    /// Cell-center coordinate along an axis.
    double center(int axis, int index) const { return (index + 0.5) * spacing(axis); }

    std::size_t index(int i, int j = 0) const noexcept
    {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(cells_[1]) + static_cast<std::size_t>(j);
    }

    /// Inverse of index(); returns {i, j} (j = 0 in 1D).
    std::array<int, 2> coords(std::size_t flat) const noexcept
    {
        const auto ny = static_cast<std::size_t>(cells_[1]);
        return {static_cast<int>(flat / ny), static_cast<int>(flat % ny)};
    }

    Grid with_convex_flag(bool convex) const;

    /// Number of interior faces normal to an axis.
    std::size_t face_count(int axis) const noexcept;

    bool operator==(const Grid& other) const noexcept;

private:
    int dim_;
    std::array<double, 2> lengths_{1.0, 1.0};
    std::array<int, 2> cells_{1, 1};
    std::array<double, 2> spacing_{1.0, 1.0};
    double measure_ = 1.0;
    double cell_volume_ = 1.0;
    bool convex_ = true;
    std::size_t size_ = 1;
};

Grid build_grid(int dim, const std::vector<double>& lengths, const std::vector<int>& cells);

/// One scalar per cell of a grid.
class Field {
public:
    explicit Field(const Grid& grid, double value = 0.0);
    Field(const Grid& grid, std::vector<double> values);

    /// Samples f at cell centers; f is called as f(x) in 1D and f(x, y) in 2D.
    template <class Fn>
    static Field sample(const Grid& grid, Fn&& f);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double& operator[](std::size_t i) noexcept { return values_[i]; }

    bool all_finite() const noexcept;
    double min() const;
    double max() const;
    double max_abs() const;

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator+=(double c) noexcept;
    Field& operator-=(double c) noexcept;
    Field& operator*=(double c) noexcept;

private:
    Grid grid_;
    std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator-(Field a, double c);
Field operator+(Field a, double c);
Field operator*(double c, Field a);

/// Face-normal values on interior faces; boundary faces carry zero by construction.
///
/// Faces normal to axis 0 sit at (i + 1/2, j) for i in [0, nx - 1), stored at
/// i * ny + j. Faces normal to axis 1 sit at (i, j + 1/2), stored at i * (ny - 1) + j.
struct FaceFlux {
    explicit FaceFlux(const Grid& grid);

    Grid grid;
    std::array<std::vector<double>, 2> axis;
};

Field laplacian(const Field& f);
FaceFlux gradient_faces(const Field& f);
Field divergence(const FaceFlux& flux);

/// Midpoint quadrature of f over the domain.
double integrate(const Field& f);
double mean(const Field& f);

/// Weighted inner product sum f*g*cellvol.
double inner(const Field& f, const Field& g);

inline constexpr double kInfinityNorm = std::numeric_limits<double>::infinity();

/// (int |f|^p)^{1/p}; p = kInfinityNorm gives max |f|. Throws for p < 1.
double lp_norm(const Field& f, double p);

/// sum over faces of flux^2 * cellvol, i.e. the discrete ||grad f||_2^2.
double face_l2_squared(const FaceFlux& flux);

/// Per-cell gradient magnitude bound: each axis contributes the larger of its
/// two face values. Reduces to max |face value| in 1D.
double face_linf(const FaceFlux& flux);

namespace detail {
/// out = laplacian(in) on the flat arrays of a grid, same arithmetic as
/// divergence(gradient_faces(.)).
void apply_laplacian(const Grid& grid, std::span<const double> in, std::span<double> out);
}  // namespace detail

/// `# grid dim=<d> lengths=<..> cells=<..>` header, then `index,x[,y],value` rows at 17 significant digits.
void write_field_csv(std::ostream& os, const Field& f);

/// %.17g rendering shared by every CSV writer.
std::string format_real(double value);

template <class Fn>
Field Field::sample(const Grid& grid, Fn&& f)
{
    std::vector<double> values(grid.size());
    if (grid.dim() == 1) {
        for (int i = 0; i < grid.cells(0); ++i) {
            if constexpr (requires { f(0.0); }) {
                values[static_cast<std::size_t>(i)] = f(grid.center(0, i));
            } else {
                values[static_cast<std::size_t>(i)] = f(grid.center(0, i), 0.0);
            }
        }
    } else {
        if constexpr (requires { f(0.0, 0.0); }) {
            for (int i = 0; i < grid.cells(0); ++i) {
                for (int j = 0; j < grid.cells(1); ++j) {
                    values[grid.index(i, j)] = f(grid.center(0, i), grid.center(1, j));
                }
            }
        } else {
            for (int i = 0; i < grid.cells(0); ++i) {
                for (int j = 0; j < grid.cells(1); ++j) {
                    values[grid.index(i, j)] = f(grid.center(0, i));
                }
            }
        }
    }
    return Field(grid, std::move(values));
}

}  // namespace angio
