#include "fhn/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace fhn::oracle {

Field2D padded_laplacian(const Field2D& field) {
    const Grid2D& g = field.grid();
    const int px = g.nx + 2;
    const int py = g.ny + 2;
    std::vector<std::vector<double>> pad(py, std::vector<double>(px, 0.0));
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) pad[iy + 1][ix + 1] = field(ix, iy);
    }
    for (int iy = 1; iy <= g.ny; ++iy) {
        pad[iy][0] = pad[iy][1];
        pad[iy][px - 1] = pad[iy][px - 2];
    }
    for (int ix = 1; ix <= g.nx; ++ix) {
        pad[0][ix] = pad[1][ix];
        pad[py - 1][ix] = pad[py - 2][ix];
    }

    Field2D out(g);
    const double h2 = g.dx * g.dx;
    for (int iy = 1; iy <= g.ny; ++iy) {
        for (int ix = 1; ix <= g.nx; ++ix) {
            out(ix - 1, iy - 1) = (pad[iy][ix - 1] + pad[iy][ix + 1] + pad[iy - 1][ix] +
                                   pad[iy + 1][ix] - 4.0 * pad[iy][ix]) /
                                  h2;
        }
    }
    return out;
}

StateRates naive_rhs(const NetworkState& state, const NetworkParams& p,
                     const NonlinearityBounds& bounds) {
    const int m = state.neurons();
    const Grid2D& g = state.grid;
    StateRates rates;
    for (int i = 0; i < m; ++i) {
        const Field2D lap = padded_laplacian(state.u[i]);
        Field2D du(g);
        Field2D dw(g);
        Field2D drho(g);
        for (int iy = 0; iy < g.ny; ++iy) {
            for (int ix = 0; ix < g.nx; ++ix) {
                const double u = state.u[i](ix, iy);
                const double w = state.w[i](ix, iy);
                const double rho = state.rho[i](ix, iy);
                double coupling = 0.0;
                for (int j = 0; j < m; ++j) coupling += p.P * (state.u[j](ix, iy) - u);
                const double f = u * (u - bounds.kappa) * (1.0 - u);
                du(ix, iy) = p.eta * lap(ix, iy) + f - p.sigma * w + p.J -
                             p.k * std::tanh(rho) * u + coupling;
                dw(ix, iy) = p.a * u + p.c - p.b * w;
                drho(ix, iy) = p.q * u - p.r * rho;
            }
        }
        rates.du.push_back(std::move(du));
        rates.dw.push_back(std::move(dw));
        rates.drho.push_back(std::move(drho));
    }
    return rates;
}

double max_abs_diff(const Field2D& a, const Field2D& b) {
    double worst = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) worst = std::max(worst, std::abs(a[n] - b[n]));
    return worst;
}

double max_abs_diff(const NetworkState& a, const NetworkState& b) {
    double worst = 0.0;
    for (int i = 0; i < a.neurons(); ++i) {
        worst = std::max({worst, max_abs_diff(a.u[i], b.u[i]), max_abs_diff(a.w[i], b.w[i]),
                          max_abs_diff(a.rho[i], b.rho[i])});
    }
    return worst;
}

Field2D cosine_mode(const Grid2D& grid) {
    const double lx = grid.nx * grid.dx;
    const double ly = grid.ny * grid.dx;
    Field2D f(grid);
    for (int iy = 0; iy < grid.ny; ++iy) {
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double x = (ix + 0.5) * grid.dx;
            const double y = (iy + 0.5) * grid.dx;
            f(ix, iy) = std::cos(std::numbers::pi * x / lx) * std::cos(std::numbers::pi * y / ly);
        }
    }
    return f;
}

double cosine_mode_eigenvalue(const Grid2D& grid) {
    const double kx = std::numbers::pi / (grid.nx * grid.dx);
    const double ky = std::numbers::pi / (grid.ny * grid.dx);
    return -(kx * kx + ky * ky);
}

}  // namespace fhn::oracle
