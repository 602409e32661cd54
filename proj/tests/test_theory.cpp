#include <doctest.h>

#include <cmath>

#include "fhn/config.hpp"
#include "fhn/theory.hpp"

using namespace fhn;

namespace {

struct Setup {
    NetworkParams p;
    NonlinearityBounds nb;
    NormConventions conv = NormConventions::reconciled();
    double C_star = 0.4;
};

Setup paper() {
    const ConfigDocument doc = paper_config();
    return {doc.run.params, doc.run.bounds};
}

double gamma_of(const Setup& s) {
    return threshold_report(s.p, s.nb, s.C_star, s.conv).constants.Gamma;
}

}  // namespace

TEST_CASE("C1") {
    const Setup s = paper();
    CHECK(compute_C1(s.p, s.nb) == doctest::Approx(437.5).epsilon(1e-14));
    NetworkParams p = s.p;
    p.b = 2.0;
    p.sigma = 1.0;
    NonlinearityBounds nb = s.nb;
    nb.lambda = 1.0;
    CHECK(compute_C1(p, nb) == 1.0);
    p = s.p;
    p.sigma *= 2.0;
    CHECK(compute_C1(p, s.nb) == doctest::Approx(437.5 / 4.0));
    p.sigma = 0.0;
    CHECK_THROWS_AS(compute_C1(p, s.nb), TheoryError);
}

TEST_CASE("C2") {
    const Setup s = paper();
    const double C1 = compute_C1(s.p, s.nb);
    CHECK(compute_C2(s.p, s.nb, C1) == doctest::Approx(876.4023).epsilon(1e-7));
    NetworkParams p = s.p;
    p.k = 0.0;
    p.J = 0.0;
    p.c = 0.0;
    p.sigma = 0.0;
    CHECK(compute_C2(p, s.nb, 10.0) == doctest::Approx(10.0 * (1.0 + s.nb.lambda / 2.0)));
    double prev = 0.0;
    for (double k : {0.0, 0.1, 0.25, 1.0, 5.0}) {
        p = s.p;
        p.k = k;
        const double c2 = compute_C2(p, s.nb, C1);
        CHECK(c2 > prev);
        prev = c2;
    }
}

TEST_CASE("mu") {
    const Setup s = paper();
    CHECK(compute_mu(s.p) == 0.175);
    NetworkParams p = s.p;
    p.a = p.q = 0.0;
    CHECK(compute_mu(p) == 0.0);
    p = s.p;
    p.b = 2.0;
    p.r = 1.0;
    p.a = p.q = 1.0;
    CHECK(compute_mu(p) == 1.0);
}

TEST_CASE("K") {
    const Setup s = paper();
    const double C1 = compute_C1(s.p, s.nb);
    const double C2 = compute_C2(s.p, s.nb, C1);
    const double K = compute_K(s.p, s.nb, C1, C2, s.conv);
    CHECK(std::abs(K - 41345645.6) <= 1.0);

    NetworkParams p = s.p;
    p.m *= 2;
    CHECK(compute_K(p, s.nb, C1, C2, s.conv) - 1.0 == doctest::Approx(2.0 * (K - 1.0)));
    CHECK(compute_K(s.p, s.nb, C1, C2, NormConventions{0.0, 0.0, 32.0}) == 1.0);

    p = s.p;
    p.a = p.q = 0.0;
    CHECK_THROWS_AS(compute_K(p, s.nb, C1, C2, s.conv), TheoryError);
}

TEST_CASE("Q") {
    const Setup s = paper();
    const double Q = compute_Q(s.p, s.nb, 41345645.6, s.conv);
    CHECK(std::abs(1.0 + Q - 1220899.6) <= 1.0);
    NetworkParams p = s.p;
    p.sigma = 0.0;
    p.m = 0;
    CHECK(compute_Q(p, s.nb, 41345645.6, s.conv) == 0.0);
    CHECK(compute_Q(s.p, s.nb, 2e7, s.conv) < compute_Q(s.p, s.nb, 3e7, s.conv));
}

TEST_CASE("Gamma") {
    const Setup s = paper();
    const double Q = 1220899.6 - 1.0;
    CHECK(compute_Gamma(s.p, s.nb, Q, s.C_star) == doctest::Approx(0.4547).epsilon(1e-3));
    NetworkParams p = s.p;
    p.k = 0.0;
    p.a = p.sigma;
    p.q = 0.0;
    CHECK(compute_Gamma(p, s.nb, Q, s.C_star) == doctest::Approx(s.nb.beta / p.m));
    p = s.p;
    p.m *= 2;
    CHECK(compute_Gamma(p, s.nb, Q, s.C_star) ==
          doctest::Approx(compute_Gamma(s.p, s.nb, Q, s.C_star) / 2.0));
}

TEST_CASE("alpha") {
    const Setup s = paper();
    const double Q = 1220899.6 - 1.0;
    CHECK(compute_alpha(s.p, s.nb, Q, s.C_star, 1.45) == 0.35);
    const double gamma = compute_Gamma(s.p, s.nb, Q, s.C_star);
    CHECK(compute_alpha(s.p, s.nb, Q, s.C_star, gamma) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(compute_alpha(s.p, s.nb, Q, s.C_star, 1e9) == std::min(s.p.b, s.p.r));
    CHECK(compute_alpha(s.p, s.nb, Q, s.C_star, 0.1) < 0.0);
    double prev = -INFINITY;
    for (double P = 0.0; P <= 3.0; P += 0.05) {
        const double a = compute_alpha(s.p, s.nb, Q, s.C_star, P);
        CHECK(a >= prev);
        CHECK(a <= std::min(s.p.b, s.p.r));
        prev = a;
    }
}

TEST_CASE("threshold report on the reference parameter set") {
    const Setup s = paper();
    const ThresholdReport r = threshold_report(s.p, s.nb, s.C_star, s.conv);
    CHECK(r.guaranteed);
    CHECK(r.P == 1.45);
    CHECK(r.constants.C1 == doctest::Approx(437.5).epsilon(1e-14));
    CHECK(r.constants.mu == 0.175);
    CHECK(r.constants.alpha == 0.35);
    CHECK(std::abs(r.constants.C2 - 876.4) <= 0.01);
    CHECK(std::abs(r.constants.K - 41345645.6) <= 1.0);
    CHECK(std::abs(1.0 + r.constants.Q - 1220899.6) <= 1.0);
    CHECK(std::abs(r.constants.Gamma - 0.45) <= 0.01);
    CHECK(r.constants.conventions == s.conv);
    CHECK(r.constants.C_star == 0.4);
    CHECK(r.verdict().find("guaranteed") != std::string::npos);

    // within half a percent of the printed values
    CHECK(r.constants.C2 == doctest::Approx(876.4).epsilon(0.005));
    CHECK(r.constants.K == doctest::Approx(41345645.6).epsilon(0.005));
    CHECK(1.0 + r.constants.Q == doctest::Approx(1220899.6).epsilon(0.005));
    CHECK(r.constants.Gamma == doctest::Approx(0.45).epsilon(0.011));
}

TEST_CASE("weak coupling gives no guarantee, never 'asynchronous'") {
    Setup s = paper();
    s.p.P = 0.1;
    const ThresholdReport r = threshold_report(s.p, s.nb, s.C_star, s.conv);
    CHECK_FALSE(r.guaranteed);
    CHECK(r.verdict().find("no guarantee") != std::string::npos);
    CHECK(r.verdict().find("asynchronous") == std::string::npos);
}

TEST_CASE("many neurons shrink Gamma") {
    Setup s = paper();
    s.p.m = 40;
    // Q grows with m through K, so recompute rather than divide
    const ThresholdReport r = threshold_report(s.p, s.nb, s.C_star, s.conv);
    CHECK(r.guaranteed);
    CHECK(r.constants.Gamma < gamma_of(paper()));
}

TEST_CASE("Gamma monotonicity by finite perturbation") {
    const Setup base = paper();
    const double Q = 1220899.6 - 1.0;
    const double g0 = compute_Gamma(base.p, base.nb, Q, base.C_star);
    auto with = [&](auto mutate) {
        Setup s = base;
        mutate(s);
        return compute_Gamma(s.p, s.nb, Q, s.C_star);
    };
    CHECK(with([](Setup& s) { s.nb.beta *= 1.1; }) >= g0);
    CHECK(with([](Setup& s) { s.p.k *= 1.1; }) >= g0);
    CHECK(with([](Setup& s) { s.p.q *= 1.1; }) >= g0);
    CHECK(compute_Gamma(base.p, base.nb, Q * 1.1, base.C_star) >= g0);
    CHECK(with([](Setup& s) { s.p.m += 1; }) <= g0);
    CHECK(with([](Setup& s) { s.p.eta *= 1.1; }) <= g0);
    CHECK(with([](Setup& s) { s.p.r *= 1.1; }) <= g0);
    // b enters through |a - sigma|^2 / (2b); hold a - sigma fixed
    CHECK(with([](Setup& s) { s.p.b *= 1.1; }) <= g0);
}

TEST_CASE("a guaranteed verdict survives larger P") {
    Setup s = paper();
    bool seen = false;
    for (double P = 0.0; P <= 5.0; P += 0.01) {
        s.p.P = P;
        const bool g = threshold_report(s.p, s.nb, s.C_star, s.conv).guaranteed;
        if (seen) CHECK(g);
        seen = seen || g;
    }
    CHECK(seen);
}

TEST_CASE("integral conventions") {
    const Setup s = paper();
    const auto conv = NormConventions::integral(s.nb, Grid2D{32, 32, 1.0});
    CHECK(conv.phi_norm_sq == 16.0 * 1024.0);
    CHECK(conv.omega_measure_K == 1024.0);
    CHECK(conv.omega_measure_Q == 1024.0);
    const auto r = threshold_report(s.p, s.nb, s.C_star, conv);
    CHECK(r.constants.K > threshold_report(s.p, s.nb, s.C_star, s.conv).constants.K);
}

TEST_CASE("absorbing entry time") {
    CHECK(absorbing_entry_time(437.5, 0.175, 0.5) == doctest::Approx(std::log(218.75) / 0.175));
    CHECK(absorbing_entry_time(1.0, 0.175, 0.5) == 0.0);
    CHECK_THROWS_AS(absorbing_entry_time(1.0, 0.0, 2.0), TheoryError);
}
