#pragma once

#include <stdexcept>
#include <string>

#include "fhn/grid.hpp"
#include "fhn/model.hpp"

namespace fhn {

/// Gagliardo-Nirenberg coefficient used when none is supplied.
inline constexpr double kDefaultGagliardoNirenberg = 0.4;

/// Values substituted for ||phi||^2 and |Omega| in the absorbing-ball radius
/// K and the L4 bound Q. They are separate inputs because the published
/// K and 1 + Q cannot both be recovered from one choice.
struct NormConventions {
    double phi_norm_sq = 0.0;
    double omega_measure_K = 0.0;
    double omega_measure_Q = 0.0;

    /// ||phi||^2 = phi_bar^2 |Omega| and |Omega| = nx ny dx^2 in both formulas.
    [[nodiscard]] static NormConventions integral(const NonlinearityBounds& bounds,
                                                  const Grid2D& grid);
    /// ||phi||^2 = 16, |Omega| = 1024 for K and 32 for Q: the values that
    /// reproduce the published constants of the 32x32 example.
    [[nodiscard]] static NormConventions reconciled();

    friend bool operator==(const NormConventions&, const NormConventions&) = default;
};

class TheoryError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// C1 = b lambda / (2 sigma^2)
[[nodiscard]] double compute_C1(const NetworkParams& p, const NonlinearityBounds& nb);

/// C2 = C1 + C1/(2 lambda) ((lambda + k)^2 + J^2) + c^2/b
///      + 4 sigma^2/(b lambda^2) (a^2/b + q^2/(2r))^2
[[nodiscard]] double compute_C2(const NetworkParams& p, const NonlinearityBounds& nb, double C1);

/// mu = min{2a^2/b + q^2/r, b/2, r}
[[nodiscard]] double compute_mu(const NetworkParams& p);

/// K = 1 + 2m/(mu min{C1, 1}) (C1 ||phi||^2 + C2 |Omega|). Throws TheoryError
/// when mu = 0.
[[nodiscard]] double compute_K(const NetworkParams& p, const NonlinearityBounds& nb, double C1,
                               double C2, const NormConventions& conv);

/// Q = 18 sigma^2/lambda^2 K
///     + m [18/lambda^2 ||phi||^2 + (3/2 + 18 J^2/lambda^2 + 18 k^3/lambda^3) |Omega|]
[[nodiscard]] double compute_Q(const NetworkParams& p, const NonlinearityBounds& nb, double K,
                               const NormConventions& conv);

/// beta + k + |a - sigma|^2/(2b) + q^2/r + C*^4 k^8 (1+Q)^2 / (eta^3 r^4):
/// the per-pair growth that the coupling m P has to beat.
[[nodiscard]] double synchronization_load(const NetworkParams& p, const NonlinearityBounds& nb,
                                          double Q, double C_star);

/// Gamma = synchronization_load / m
[[nodiscard]] double compute_Gamma(const NetworkParams& p, const NonlinearityBounds& nb, double Q,
                                   double C_star);

/// alpha(P) = min{b, r, 2mP - 2 load}. May be <= 0 when P <= Gamma.
[[nodiscard]] double compute_alpha(const NetworkParams& p, const NonlinearityBounds& nb, double Q,
                                   double C_star, double P);

/// Time after which every trajectory from {||g||^2 <= L} stays in the
/// absorbing ball: (1/mu) log+(L max{C1,1}/min{C1,1}).
[[nodiscard]] double absorbing_entry_time(double C1, double mu, double L);

struct TheoryConstants {
    double C1 = 0.0;
    double C2 = 0.0;
    double mu = 0.0;
    double K = 0.0;
    double Q = 0.0;
    double Gamma = 0.0;
    double alpha = 0.0;
    double C_star = kDefaultGagliardoNirenberg;
    NormConventions conventions;
};

struct ThresholdReport {
    TheoryConstants constants;
    double P = 0.0;
    bool guaranteed = false;  ///< P > Gamma

    /// Human-readable verdict. The condition is sufficient only, so a failed
    /// check reads "no guarantee", never "asynchronous".
    [[nodiscard]] std::string verdict() const;
};

[[nodiscard]] ThresholdReport threshold_report(const NetworkParams& p,
                                               const NonlinearityBounds& nb, double C_star,
                                               const NormConventions& conv);

}  // namespace fhn
