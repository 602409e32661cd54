#include <doctest.h>

#include <algorithm>
#include <string>

#include <json.hpp>

#include "fhn/config.hpp"

using namespace fhn;
using nlohmann::json;

namespace {

const std::string kConfigs = std::string(FHN_SOURCE_DIR) + "/configs/";

json paper_json() { return json::parse(to_json(paper_config())); }

std::vector<std::string> errors_of(const json& j) {
    try {
        (void)parse_config(j.dump());
    } catch (const ConfigError& e) {
        return e.errors();
    }
    return {};
}

bool any_contains(const std::vector<std::string>& errors, const std::string& needle) {
    return std::any_of(errors.begin(), errors.end(),
                       [&](const std::string& e) { return e.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("bundled configs parse to the documented values") {
    const ConfigDocument doc = load_config(kConfigs + "paper.json");
    const ConfigDocument ref = paper_config();
    CHECK(doc.run.params == ref.run.params);
    CHECK(doc.run.bounds == ref.run.bounds);
    CHECK(doc.run.grid == ref.run.grid);
    CHECK(doc.run.dt == ref.run.dt);
    CHECK(doc.run.n_steps == 10000);
    CHECK(doc.run.seed == ref.run.seed);
    CHECK(doc.conventions() == NormConventions::reconciled());
    CHECK(doc.C_star == 0.4);

    const auto& p = doc.run.params;
    CHECK(p.eta == 10.0);
    CHECK(p.sigma == 0.01);
    CHECK(p.J == 0.5);
    CHECK(p.k == 0.25);
    CHECK(p.a == 0.35);
    CHECK(p.b == 0.35);
    CHECK(p.c == 0.7);
    CHECK(p.q == 0.35);
    CHECK(p.r == 10.0);
    CHECK(p.P == 1.45);
    CHECK(p.m == 4);
    CHECK(doc.run.bounds.lambda == 0.25);
    CHECK(doc.run.bounds.phi_bar == 4.0);
    CHECK(doc.run.grid.nx == 32);
    CHECK(doc.run.dt == 0.00025);

    const ConfigDocument tables = load_config(kConfigs + "paper-tables.json");
    CHECK(tables.run.params.k == 5.0);
    CHECK(tables.run.params == paper_tables_config().run.params);
}

TEST_CASE("to_json round trips") {
    const ConfigDocument doc = paper_config();
    const ConfigDocument back = parse_config(to_json(doc));
    CHECK(to_json(back) == to_json(doc));
}

TEST_CASE("defaults for cadence and theory inputs") {
    json j = paper_json();
    for (const char* key : {"record_every", "snapshot_every", "integrator", "record_initial",
                            "C_star", "phi_norm_sq", "omega_measure_K", "omega_measure_Q",
                            "envelope_slack", "transient", "tail_fraction", "out_dir"}) {
        j.erase(key);
    }
    const ConfigDocument doc = parse_config(j.dump());
    CHECK(doc.run.record_every == 1);
    CHECK(doc.run.snapshot_every == 0);
    CHECK(doc.run.integrator == Integrator::Euler);
    CHECK(doc.C_star == 0.4);
    CHECK(doc.envelope_slack == 1.5);
    CHECK(doc.tail_fraction == 0.2);
    CHECK(doc.transient_time() == doctest::Approx(0.1 * doc.end_time()));
    // integral conventions when none are given
    CHECK(doc.conventions() == NormConventions::integral(doc.run.bounds, doc.run.grid));
}

TEST_CASE("unknown key is named") {
    json j = paper_json();
    j["etaa"] = 10.0;
    const auto errors = errors_of(j);
    REQUIRE(errors.size() == 1);
    CHECK(errors[0].find("'etaa'") != std::string::npos);
}

TEST_CASE("dt above the stability bound cites cfl_max_dt") {
    json j = paper_json();
    j["dt"] = 0.05;
    const auto errors = errors_of(j);
    REQUIRE(errors.size() == 1);
    CHECK(errors[0].find("cfl_max_dt") != std::string::npos);
}

TEST_CASE("all errors are collected") {
    json j = paper_json();
    j["sigma"] = -1.0;
    j["m"] = 1;
    j["tail_fraction"] = 2.0;
    j["bogus"] = true;
    const auto errors = errors_of(j);
    CHECK(errors.size() == 4);
    CHECK(any_contains(errors, "sigma"));
    CHECK(any_contains(errors, "'m'"));
    CHECK(any_contains(errors, "tail_fraction"));
    CHECK(any_contains(errors, "bogus"));
}

TEST_CASE("missing keys and wrong types") {
    json j = paper_json();
    j.erase("eta");
    j["nx"] = "thirty-two";
    j["integrator"] = "leapfrog";
    const auto errors = errors_of(j);
    CHECK(any_contains(errors, "missing required key 'eta'"));
    CHECK(any_contains(errors, "'nx'"));

    json k = paper_json();
    k["integrator"] = "leapfrog";
    k["amplitude"] = -0.1;
    k["nx"] = 2;
    const auto more = errors_of(k);
    CHECK(any_contains(more, "integrator"));
    CHECK(any_contains(more, "amplitude"));
    CHECK(any_contains(more, "'nx'"));
}

TEST_CASE("malformed documents") {
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
    CHECK_THROWS_AS(load_config(kConfigs + "does-not-exist.json"), ConfigError);
}

TEST_CASE("transient must lie inside the run") {
    json j = paper_json();
    j["transient"] = 100.0;
    CHECK(any_contains(errors_of(j), "transient"));
}
