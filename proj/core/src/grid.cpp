#include "angio/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

#include "angio/errors.hpp"

namespace angio {

Grid::Grid(int dim, std::span<const double> lengths, std::span<const int> cells) : dim_(dim)
{
    if (dim != 1 && dim != 2) {
        throw InvalidArgument("unsupported dimension " + std::to_string(dim) + " (expected 1 or 2)");
    }
    if (lengths.size() != static_cast<std::size_t>(dim) || cells.size() != static_cast<std::size_t>(dim)) {
        throw InvalidArgument("grid lengths and cells must each have exactly " + std::to_string(dim) + " entries");
    }
    measure_ = 1.0;
    cell_volume_ = 1.0;
    size_ = 1;
    for (int a = 0; a < dim; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        if (!(lengths[ua] > 0.0) || !std::isfinite(lengths[ua])) {
            throw InvalidArgument("grid length along axis " + std::to_string(a) + " must be positive");
        }
        if (cells[ua] < 4) {
            throw InvalidArgument("grid needs at least 4 cells along axis " + std::to_string(a));
        }
        lengths_[ua] = lengths[ua];
        cells_[ua] = cells[ua];
        spacing_[ua] = lengths[ua] / cells[ua];
        measure_ *= lengths[ua];
        cell_volume_ *= spacing_[ua];
        size_ *= static_cast<std::size_t>(cells[ua]);
    }
}

double Grid::max_spacing() const noexcept
{
    return dim_ == 1 ? spacing_[0] : std::max(spacing_[0], spacing_[1]);
}

Grid Grid::with_convex_flag(bool convex) const
{
    Grid g = *this;
    g.convex_ = convex;
    return g;
}

std::size_t Grid::face_count(int axis) const noexcept
{
    if (axis >= dim_) {
        return 0;
    }
    const auto nx = static_cast<std::size_t>(cells_[0]);
    const auto ny = static_cast<std::size_t>(cells_[1]);
    return axis == 0 ? (nx - 1) * ny : nx * (ny - 1);
}

bool Grid::operator==(const Grid& other) const noexcept
{
    return dim_ == other.dim_ && lengths_ == other.lengths_ && cells_ == other.cells_ && convex_ == other.convex_;
}

Grid build_grid(int dim, const std::vector<double>& lengths, const std::vector<int>& cells)
{
    return Grid(dim, lengths, cells);
}

Field::Field(const Grid& grid, double value) : grid_(grid), values_(grid.size(), value) {}

Field::Field(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values))
{
    if (values_.size() != grid_.size()) {
        throw InvalidArgument("field has " + std::to_string(values_.size()) + " values but grid has " +
                              std::to_string(grid_.size()) + " cells");
    }
}

bool Field::all_finite() const noexcept
{
    return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }
double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

double Field::max_abs() const
{
    double m = 0.0;
    for (double x : values_) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

namespace {
void require_same_grid(const Field& a, const Field& b)
{
    if (!(a.grid() == b.grid())) {
        throw InvalidArgument("fields live on different grids");
    }
}
}  // namespace

Field& Field::operator+=(const Field& other)
{
    require_same_grid(*this, other);
    for (std::size_t i = 0; i < values_.size(); ++i) {
        values_[i] += other.values_[i];
    }
    return *this;
}

Field& Field::operator-=(const Field& other)
{
    require_same_grid(*this, other);
    for (std::size_t i = 0; i < values_.size(); ++i) {
        values_[i] -= other.values_[i];
    }
    return *this;
}

Field& Field::operator+=(double c) noexcept
{
    for (double& x : values_) {
        x += c;
    }
    return *this;
}

Field& Field::operator-=(double c) noexcept
{
    for (double& x : values_) {
        x -= c;
    }
    return *this;
}

Field& Field::operator*=(double c) noexcept
{
    for (double& x : values_) {
        x *= c;
    }
    return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator-(Field a, double c) { return a -= c; }
Field operator+(Field a, double c) { return a += c; }
Field operator*(double c, Field a) { return a *= c; }

FaceFlux::FaceFlux(const Grid& g) : grid(g)
{
    axis[0].assign(g.face_count(0), 0.0);
    axis[1].assign(g.face_count(1), 0.0);
}

FaceFlux gradient_faces(const Field& f)
{
    const Grid& g = f.grid();
    FaceFlux flux(g);
    const int nx = g.cells(0);
    const int ny = g.cells(1);
    const double hx = g.spacing(0);
    auto v = f.values();
    for (int i = 0; i + 1 < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            flux.axis[0][static_cast<std::size_t>(i) * ny + j] = (v[g.index(i + 1, j)] - v[g.index(i, j)]) / hx;
        }
    }
    if (g.dim() == 2) {
        const double hy = g.spacing(1);
        for (int i = 0; i < nx; ++i) {
            for (int j = 0; j + 1 < ny; ++j) {
                flux.axis[1][static_cast<std::size_t>(i) * (ny - 1) + j] = (v[g.index(i, j + 1)] - v[g.index(i, j)]) / hy;
            }
        }
    }
    return flux;
}

namespace {
// Net outflow per unit volume; boundary faces contribute exactly zero.
void divergence_into(const Grid& g, const std::array<std::vector<double>, 2>& faces, std::span<double> out)
{
    const int nx = g.cells(0);
    const int ny = g.cells(1);
    const double hx = g.spacing(0);
    const double hy = g.spacing(1);
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const double right = i + 1 < nx ? faces[0][static_cast<std::size_t>(i) * ny + j] : 0.0;
            const double left = i > 0 ? faces[0][static_cast<std::size_t>(i - 1) * ny + j] : 0.0;
            double acc = (right - left) / hx;
            if (g.dim() == 2) {
                const double top = j + 1 < ny ? faces[1][static_cast<std::size_t>(i) * (ny - 1) + j] : 0.0;
                const double bottom = j > 0 ? faces[1][static_cast<std::size_t>(i) * (ny - 1) + j - 1] : 0.0;
                acc += (top - bottom) / hy;
            }
            out[g.index(i, j)] = acc;
        }
    }
}
}  // namespace

Field divergence(const FaceFlux& flux)
{
    Field out(flux.grid);
    divergence_into(flux.grid, flux.axis, out.values());
    return out;
}

namespace detail {
void apply_laplacian(const Grid& g, std::span<const double> in, std::span<double> out)
{
    const int nx = g.cells(0);
    const int ny = g.cells(1);
    const double hx = g.spacing(0);
    const double hy = g.spacing(1);
    if (g.dim() == 1) {
        for (int i = 0; i < nx; ++i) {
            const double right = i + 1 < nx ? (in[i + 1] - in[i]) / hx : 0.0;
            const double left = i > 0 ? (in[i] - in[i - 1]) / hx : 0.0;
            out[i] = (right - left) / hx;
        }
        return;
    }
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const std::size_t c = g.index(i, j);
            const double right = i + 1 < nx ? (in[g.index(i + 1, j)] - in[c]) / hx : 0.0;
            const double left = i > 0 ? (in[c] - in[g.index(i - 1, j)]) / hx : 0.0;
            const double top = j + 1 < ny ? (in[c + 1] - in[c]) / hy : 0.0;
            const double bottom = j > 0 ? (in[c] - in[c - 1]) / hy : 0.0;
            double acc = (right - left) / hx;
            acc += (top - bottom) / hy;
            out[c] = acc;
        }
    }
}
}  // namespace detail

Field laplacian(const Field& f)
{
    Field out(f.grid());
    detail::apply_laplacian(f.grid(), f.values(), out.values());
    return out;
}

double integrate(const Field& f)
{
    double sum = 0.0;
    for (double x : f.values()) {
        sum += x;
    }
    return sum * f.grid().cell_volume();
}

double mean(const Field& f) { return integrate(f) / f.grid().measure(); }

double inner(const Field& f, const Field& g)
{
    require_same_grid(f, g);
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        sum += f[i] * g[i];
    }
    return sum * f.grid().cell_volume();
}

double lp_norm(const Field& f, double p)
{
    if (std::isinf(p) && p > 0) {
        return f.max_abs();
    }
    if (!(p >= 1.0)) {
        throw InvalidArgument("lp_norm requires p >= 1 (got " + format_real(p) + ")");
    }
    double sum = 0.0;
    if (p == 2.0) {
        for (double x : f.values()) {
            sum += x * x;
        }
        return std::sqrt(sum * f.grid().cell_volume());
    }
    for (double x : f.values()) {
        sum += std::pow(std::abs(x), p);
    }
    return std::pow(sum * f.grid().cell_volume(), 1.0 / p);
}

double face_l2_squared(const FaceFlux& flux)
{
    double sum = 0.0;
    for (const auto& a : flux.axis) {
        for (double x : a) {
            sum += x * x;
        }
    }
    return sum * flux.grid.cell_volume();
}

double face_linf(const FaceFlux& flux)
{
    const Grid& g = flux.grid;
    const int nx = g.cells(0);
    const int ny = g.cells(1);
    double best = 0.0;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            double gx = 0.0;
            if (i + 1 < nx) gx = std::max(gx, std::abs(flux.axis[0][static_cast<std::size_t>(i) * ny + j]));
            if (i > 0) gx = std::max(gx, std::abs(flux.axis[0][static_cast<std::size_t>(i - 1) * ny + j]));
            double gy = 0.0;
            if (g.dim() == 2) {
                if (j + 1 < ny) gy = std::max(gy, std::abs(flux.axis[1][static_cast<std::size_t>(i) * (ny - 1) + j]));
                if (j > 0) gy = std::max(gy, std::abs(flux.axis[1][static_cast<std::size_t>(i) * (ny - 1) + j - 1]));
            }
            best = std::max(best, std::hypot(gx, gy));
        }
    }
    return best;
}

std::string format_real(double value)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_field_csv(std::ostream& os, const Field& f)
{
    const Grid& g = f.grid();
    os << "# grid dim=" << g.dim() << " lengths=";
    for (int a = 0; a < g.dim(); ++a) {
        os << (a ? "," : "") << format_real(g.length(a));
    }
    os << " cells=";
    for (int a = 0; a < g.dim(); ++a) {
        os << (a ? "," : "") << g.cells(a);
    }
    os << '\n';
    for (std::size_t c = 0; c < f.size(); ++c) {
        const auto [i, j] = g.coords(c);
        os << c << ',' << format_real(g.center(0, i));
        if (g.dim() == 2) {
            os << ',' << format_real(g.center(1, j));
        }
        os << ',' << format_real(f[c]) << '\n';
    }
}

}  // namespace angio
