#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fhn {

/// Uniform 2-D grid with identical spacing in both axes. Point (ix, iy) sits
/// at (ix * dx, iy * dx). The homogeneous Neumann boundary is realized by
/// copying each boundary value into its ghost cell, which places the
/// zero-flux wall half a spacing outside the outermost points.
struct Grid2D {
    int nx = 0;
    int ny = 0;
    double dx = 1.0;

    [[nodiscard]] std::size_t points() const noexcept {
        return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
    }
    /// |Omega| = nx * ny * dx^2
    [[nodiscard]] double measure() const noexcept {
        return static_cast<double>(nx) * static_cast<double>(ny) * dx * dx;
    }

    friend bool operator==(const Grid2D&, const Grid2D&) = default;
};

/// Throws std::invalid_argument unless nx, ny >= 3 and dx > 0.
void validate(const Grid2D& grid);

/// Scalar field on a Grid2D, stored row-major (iy outer, ix inner).
class Field2D {
public:
    Field2D() = default;
    explicit Field2D(const Grid2D& grid, double fill = 0.0);

    [[nodiscard]] const Grid2D& grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

    double& operator()(int ix, int iy) noexcept { return values_[index(ix, iy)]; }
    double operator()(int ix, int iy) const noexcept { return values_[index(ix, iy)]; }

    double& operator[](std::size_t i) noexcept { return values_[i]; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    [[nodiscard]] std::span<double> values() noexcept { return values_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

    [[nodiscard]] std::size_t index(int ix, int iy) const noexcept {
        return static_cast<std::size_t>(iy) * static_cast<std::size_t>(grid_.nx) +
               static_cast<std::size_t>(ix);
    }

    [[nodiscard]] bool all_finite() const noexcept;
    [[nodiscard]] double max_abs() const noexcept;

    friend bool operator==(const Field2D&, const Field2D&) = default;

private:
    Grid2D grid_;
    std::vector<double> values_;
};

/// Five-point Laplacian with reflecting ghost cells (zero normal derivative).
[[nodiscard]] Field2D laplacian_neumann(const Field2D& field);

/// Same as above, writing into a preallocated field of matching grid.
void laplacian_neumann(const Field2D& field, Field2D& out);

/// Sum of laplacian_neumann(field) over all points. Zero up to rounding,
/// since every interior flux appears twice with opposite sign and the
/// boundary fluxes vanish.
[[nodiscard]] double zero_flux_sum(const Field2D& field);

/// safety * dx^2 / (4 * diffusion): explicit-Euler stability bound for 2-D
/// diffusion. Requires 0 < safety <= 1.
[[nodiscard]] double cfl_max_dt(double diffusion, const Grid2D& grid, double safety);

}  // namespace fhn
