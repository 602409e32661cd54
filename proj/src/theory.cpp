#include "fhn/theory.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace fhn {

NormConventions NormConventions::integral(const NonlinearityBounds& bounds, const Grid2D& grid) {
    const double omega = grid.measure();
    return NormConventions{bounds.phi_bar * bounds.phi_bar * omega, omega, omega};
}

NormConventions NormConventions::reconciled() { return NormConventions{16.0, 1024.0, 32.0}; }

double compute_C1(const NetworkParams& p, const NonlinearityBounds& nb) {
    if (!(p.sigma > 0.0)) throw TheoryError("C1 needs sigma > 0");
    return p.b * nb.lambda / (2.0 * p.sigma * p.sigma);
}

double compute_C2(const NetworkParams& p, const NonlinearityBounds& nb, double C1) {
    if (!(nb.lambda > 0.0 && p.b > 0.0 && p.r > 0.0)) {
        throw TheoryError("C2 needs lambda, b, r > 0");
    }
    const double lk = nb.lambda + p.k;
    const double inner = p.a * p.a / p.b + p.q * p.q / (2.0 * p.r);
    return C1 + C1 / (2.0 * nb.lambda) * (lk * lk + p.J * p.J) + p.c * p.c / p.b +
           4.0 * p.sigma * p.sigma / (p.b * nb.lambda * nb.lambda) * inner * inner;
}

double compute_mu(const NetworkParams& p) {
    if (!(p.b > 0.0 && p.r > 0.0)) throw TheoryError("mu needs b, r > 0");
    return std::min({2.0 * p.a * p.a / p.b + p.q * p.q / p.r, p.b / 2.0, p.r});
}

double compute_K(const NetworkParams& p, const NonlinearityBounds&, double C1, double C2,
                 const NormConventions& conv) {
    const double mu = compute_mu(p);
    if (!(mu > 0.0)) throw TheoryError("absorbing radius K is undefined for mu = 0");
    return 1.0 + 2.0 * p.m / (mu * std::min(C1, 1.0)) *
                     (C1 * conv.phi_norm_sq + C2 * conv.omega_measure_K);
}

double compute_Q(const NetworkParams& p, const NonlinearityBounds& nb, double K,
                 const NormConventions& conv) {
    const double lam = nb.lambda;
    if (!(lam > 0.0)) throw TheoryError("Q needs lambda > 0");
    const double lam2 = lam * lam;
    return 18.0 * p.sigma * p.sigma / lam2 * K +
           p.m * (18.0 / lam2 * conv.phi_norm_sq +
                  (1.5 + 18.0 * p.J * p.J / lam2 + 18.0 * p.k * p.k * p.k / (lam2 * lam)) *
                      conv.omega_measure_Q);
}

double synchronization_load(const NetworkParams& p, const NonlinearityBounds& nb, double Q,
                            double C_star) {
    if (!(p.eta > 0.0 && p.r > 0.0 && p.b > 0.0)) {
        throw TheoryError("threshold needs eta, r, b > 0");
    }
    const double as = p.a - p.sigma;
    const double c2 = C_star * C_star;
    const double k2 = p.k * p.k;
    const double k4 = k2 * k2;
    const double r2 = p.r * p.r;
    const double oq = 1.0 + Q;
    const double gn = c2 * c2 * k4 * k4 * oq * oq / (p.eta * p.eta * p.eta * r2 * r2);
    return nb.beta + p.k + as * as / (2.0 * p.b) + p.q * p.q / p.r + gn;
}

double compute_Gamma(const NetworkParams& p, const NonlinearityBounds& nb, double Q,
                     double C_star) {
    return synchronization_load(p, nb, Q, C_star) / p.m;
}

double compute_alpha(const NetworkParams& p, const NonlinearityBounds& nb, double Q,
                     double C_star, double P) {
    const double margin = 2.0 * p.m * P - 2.0 * synchronization_load(p, nb, Q, C_star);
    return std::min({p.b, p.r, margin});
}

double absorbing_entry_time(double C1, double mu, double L) {
    if (!(mu > 0.0)) throw TheoryError("entry time is undefined for mu = 0");
    const double ratio = L * std::max(C1, 1.0) / std::min(C1, 1.0);
    return ratio > 1.0 ? std::log(ratio) / mu : 0.0;
}

std::string ThresholdReport::verdict() const {
    if (guaranteed) {
        return fmt::format(
            "synchronization guaranteed: P = {:.6g} > Gamma = {:.6g}, rate alpha = {:.6g}", P,
            constants.Gamma, constants.alpha);
    }
    return fmt::format(
        "no guarantee: P = {:.6g} <= Gamma = {:.6g} (the threshold is sufficient only)", P,
        constants.Gamma);
}

ThresholdReport threshold_report(const NetworkParams& p, const NonlinearityBounds& nb,
                                 double C_star, const NormConventions& conv) {
    ThresholdReport report;
    TheoryConstants& tc = report.constants;
    tc.C_star = C_star;
    tc.conventions = conv;
    tc.C1 = compute_C1(p, nb);
    tc.C2 = compute_C2(p, nb, tc.C1);
    tc.mu = compute_mu(p);
    tc.K = compute_K(p, nb, tc.C1, tc.C2, conv);
    tc.Q = compute_Q(p, nb, tc.K, conv);
    tc.Gamma = compute_Gamma(p, nb, tc.Q, C_star);
    tc.alpha = compute_alpha(p, nb, tc.Q, C_star, p.P);
    report.P = p.P;
    report.guaranteed = p.P > tc.Gamma;
    return report;
}

}  // namespace fhn
