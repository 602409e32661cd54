#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "fhn/model.hpp"

using namespace fhn;

namespace {

NetworkParams paper_params() {
    return NetworkParams{10.0, 0.01, 0.5, 0.25, 0.35, 0.35, 0.7, 0.35, 10.0, 1.45, 4};
}

bool mentions(const std::vector<std::string>& errors, const std::string& key) {
    return std::any_of(errors.begin(), errors.end(),
                       [&](const std::string& e) { return e.rfind(key, 0) == 0; });
}

}  // namespace

TEST_CASE("cubic roots and tail sign") {
    const auto nb = NonlinearityBounds::prototype(1.0);
    CHECK(f_eval(0.0, nb) == 0.0);
    CHECK(f_eval(1.0, nb) == 0.0);
    const auto nb2 = NonlinearityBounds::prototype(0.3);
    CHECK(f_eval(0.0, nb2) == 0.0);
    CHECK(f_eval(0.3, nb2) == 0.0);
    CHECK(f_eval(1.0, nb2) == 0.0);
    CHECK(f_eval(1e3, nb2) < 0.0);
    CHECK(f_eval(-1e3, nb2) > 0.0);
}

TEST_CASE("derivative agrees with a central difference") {
    const auto nb = NonlinearityBounds::prototype(0.7);
    for (double s : {-3.0, -0.2, 0.1, 0.5, 2.0}) {
        const double h = 1e-6;
        const double fd = (f_eval(s + h, nb) - f_eval(s - h, nb)) / (2 * h);
        CHECK(f_derivative(s, nb) == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("prototype bounds") {
    const auto nb = NonlinearityBounds::prototype(1.0);
    CHECK(nb.lambda == 0.25);
    CHECK(nb.phi_bar == 4.0);
    CHECK(nb.beta == doctest::Approx(4.0 / 3.0));
    const auto nb3 = NonlinearityBounds::prototype(3.0);
    CHECK(nb3.phi_bar == doctest::Approx(64.0));
    CHECK(nb3.beta == doctest::Approx(16.0 / 3.0));
}

TEST_CASE("assumption holds for prototype bounds") {
    const auto nb = NonlinearityBounds::prototype(1.0);
    const auto report = verify_assumption(nb, {-10.0, 10.0}, 10000);
    CHECK(report.ok());
    CHECK(report.samples_checked >= 10000);
    // sup f' = (1 - kappa + kappa^2) / 3, well inside the (1 + kappa)^2 / 3 bound
    CHECK(report.max_derivative == doctest::Approx(1.0 / 3.0));
    CHECK(verify_assumption(nb, {-100.0, 100.0}, 100000).ok());
    for (double kappa : {0.1, 0.5, 2.0, 5.0}) {
        CHECK(verify_assumption(NonlinearityBounds::prototype(kappa), {-10.0, 10.0}, 5000).ok());
    }
}

TEST_CASE("beta below sup f' is caught at the argmax") {
    auto nb = NonlinearityBounds::prototype(1.0);
    nb.beta /= 2.0;  // 2/3 still exceeds sup f' = 1/3
    CHECK(verify_assumption(nb, {-10.0, 10.0}, 10000).ok());
    nb.beta = 0.3;
    const auto report = verify_assumption(nb, {-10.0, 10.0}, 10000);
    REQUIRE_FALSE(report.ok());
    bool near_argmax = false;
    for (const auto& v : report.violations) {
        CHECK(v.kind == AssumptionKind::DerivativeBound);
        near_argmax = near_argmax || std::abs(v.s - 2.0 / 3.0) < 1e-9;
    }
    CHECK(near_argmax);
}

TEST_CASE("zero lambda only weakens the dissipation inequality") {
    auto nb = NonlinearityBounds::prototype(1.0);
    nb.lambda = 0.0;
    const auto report = verify_assumption(nb, {-10.0, 10.0}, 10000);
    for (const auto& v : report.violations) CHECK(v.kind != AssumptionKind::Dissipation);
}

TEST_CASE("too few samples is rejected") {
    CHECK_THROWS(verify_assumption(NonlinearityBounds::prototype(1.0), {-1.0, 1.0}, 99));
}

TEST_CASE("parameter validation") {
    CHECK(validate(paper_params()).empty());
    NetworkParams p = paper_params();
    p.P = 0.0;
    p.J = -3.0;
    CHECK(validate(p).empty());
    p.eta = 0.0;
    p.r = -1.0;
    p.m = 1;
    const auto errors = validate(p);
    CHECK(mentions(errors, "eta"));
    CHECK(mentions(errors, "r"));
    CHECK(mentions(errors, "m"));
    p = paper_params();
    p.P = -0.1;
    CHECK(mentions(validate(p), "P"));
}

TEST_CASE("random initial data") {
    const Grid2D g{32, 32, 1.0};
    const auto p = paper_params();
    const NetworkState a = init_random(g, p, 0.05, 7);
    const NetworkState b = init_random(g, p, 0.05, 7);
    CHECK(a == b);
    CHECK(a.t == 0.0);
    CHECK(a.neurons() == 4);
    CHECK(a.u.size() == 4);
    CHECK(a.w.size() == 4);
    CHECK(a.rho.size() == 4);
    for (const auto* stack : {&a.u, &a.w, &a.rho}) {
        for (const auto& f : *stack) {
            for (double v : f.values()) {
                CHECK(v >= 0.0);
                CHECK(v <= 0.05);
            }
        }
    }
    CHECK_FALSE(a == init_random(g, p, 0.05, 8));
    // independent fields
    CHECK_FALSE(a.u[0] == a.u[1]);
    CHECK_FALSE(a.u[0] == a.w[0]);

    const NetworkState zero = init_random(g, p, 0.0, 7);
    CHECK(zero == NetworkState(g, 4, 0.0));
    CHECK_THROWS(init_random(g, p, -1.0, 7));
}

TEST_CASE("state container") {
    NetworkState s(Grid2D{4, 3, 1.0}, 3, 1.5);
    CHECK(s.neurons() == 3);
    CHECK(s.all_finite());
    CHECK(s.w[2](3, 2) == 1.5);
    s.rho[1](0, 0) = INFINITY;
    CHECK_FALSE(s.all_finite());
}
