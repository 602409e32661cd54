#pragma once

// Brute-force reference computations. They share no code with the
// production stencil or coupling so that agreement between the two is
// meaningful.

#include "fhn/grid.hpp"
#include "fhn/model.hpp"
#include "fhn/network.hpp"

namespace fhn::oracle {

/// Copies the field into an (nx+2) x (ny+2) array whose ghost ring repeats
/// the adjacent boundary values, then applies the five-point stencil.
[[nodiscard]] Field2D padded_laplacian(const Field2D& field);

/// Right-hand side with the coupling written as the literal double sum
/// sum_j P (u_j - u_i), and the Laplacian from padded_laplacian.
[[nodiscard]] StateRates naive_rhs(const NetworkState& state, const NetworkParams& params,
                                   const NonlinearityBounds& bounds);

[[nodiscard]] double max_abs_diff(const Field2D& a, const Field2D& b);

/// Largest pointwise difference across all three stacks.
[[nodiscard]] double max_abs_diff(const NetworkState& a, const NetworkState& b);

/// cos(pi x / Lx) cos(pi y / Ly) sampled at (ix + 1/2, iy + 1/2) dx with
/// Lx = nx dx, Ly = ny dx, so the zero-flux walls fall where the reflected
/// ghost cells put them.
[[nodiscard]] Field2D cosine_mode(const Grid2D& grid);

/// -(pi/Lx)^2 - (pi/Ly)^2: continuum eigenvalue of cosine_mode.
[[nodiscard]] double cosine_mode_eigenvalue(const Grid2D& grid);

}  // namespace fhn::oracle
