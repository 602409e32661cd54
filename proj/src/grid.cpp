#include "fhn/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fhn {

void validate(const Grid2D& grid) {
    if (grid.nx < 3 || grid.ny < 3) {
        throw std::invalid_argument("grid needs at least 3 points per axis");
    }
    if (!(grid.dx > 0.0) || !std::isfinite(grid.dx)) {
        throw std::invalid_argument("grid spacing dx must be positive and finite");
    }
}

Field2D::Field2D(const Grid2D& grid, double fill) : grid_(grid), values_(grid.points(), fill) {}

bool Field2D::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double Field2D::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

void laplacian_neumann(const Field2D& field, Field2D& out) {
    const Grid2D& g = field.grid();
    if (out.grid() != g) out = Field2D(g);
    const double inv_h2 = 1.0 / (g.dx * g.dx);
    const int nx = g.nx;
    const int ny = g.ny;
    const auto in = field.values();
    auto res = out.values();

    for (int iy = 0; iy < ny; ++iy) {
        // A ghost row/column mirrors the boundary value, so the index clamps to itself.
        const std::size_t row = static_cast<std::size_t>(iy) * nx;
        const std::size_t row_s = static_cast<std::size_t>(iy > 0 ? iy - 1 : iy) * nx;
        const std::size_t row_n = static_cast<std::size_t>(iy < ny - 1 ? iy + 1 : iy) * nx;
        for (int ix = 0; ix < nx; ++ix) {
            const int ix_w = ix > 0 ? ix - 1 : ix;
            const int ix_e = ix < nx - 1 ? ix + 1 : ix;
            const double c = in[row + ix];
            res[row + ix] = (in[row + ix_e] + in[row + ix_w] + in[row_n + ix] + in[row_s + ix] -
                             4.0 * c) *
                            inv_h2;
        }
    }
}

Field2D laplacian_neumann(const Field2D& field) {
    Field2D out(field.grid());
    laplacian_neumann(field, out);
    return out;
}

double zero_flux_sum(const Field2D& field) {
    const Field2D lap = laplacian_neumann(field);
    double sum = 0.0;
    for (double v : lap.values()) sum += v;
    return sum;
}

double cfl_max_dt(double diffusion, const Grid2D& grid, double safety) {
    if (!(safety > 0.0 && safety <= 1.0)) {
        throw std::invalid_argument("cfl safety factor must lie in (0, 1]");
    }
    if (!(diffusion > 0.0)) throw std::invalid_argument("diffusion coefficient must be positive");
    return safety * grid.dx * grid.dx / (4.0 * diffusion);
}

}  // namespace fhn
