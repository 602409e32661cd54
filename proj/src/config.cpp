#include "fhn/config.hpp"

#include <cstdint>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace fhn {

using nlohmann::json;

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
    std::string out = "invalid configuration:";
    for (const auto& e : errors) out += "\n  " + e;
    return out;
}

enum class Kind { Number, Integer, Boolean, String };

struct KeySpec {
    const char* name;
    Kind kind;
    bool required;
};

constexpr KeySpec kKeys[] = {
    {"eta", Kind::Number, true},           {"sigma", Kind::Number, true},
    {"J", Kind::Number, true},             {"k", Kind::Number, true},
    {"a", Kind::Number, true},             {"b", Kind::Number, true},
    {"c", Kind::Number, true},             {"q", Kind::Number, true},
    {"r", Kind::Number, true},             {"P", Kind::Number, true},
    {"m", Kind::Integer, true},            {"kappa", Kind::Number, true},
    {"nx", Kind::Integer, true},           {"ny", Kind::Integer, true},
    {"dx", Kind::Number, true},            {"dt", Kind::Number, true},
    {"n_steps", Kind::Integer, true},      {"seed", Kind::Integer, true},
    {"amplitude", Kind::Number, true},     {"record_every", Kind::Integer, false},
    {"snapshot_every", Kind::Integer, false}, {"integrator", Kind::String, false},
    {"record_initial", Kind::Boolean, false}, {"C_star", Kind::Number, false},
    {"phi_norm_sq", Kind::Number, false},  {"omega_measure_K", Kind::Number, false},
    {"omega_measure_Q", Kind::Number, false}, {"envelope_slack", Kind::Number, false},
    {"transient", Kind::Number, false},    {"tail_fraction", Kind::Number, false},
    {"out_dir", Kind::String, false},
};

const char* describe(Kind kind) {
    switch (kind) {
        case Kind::Number: return "a number";
        case Kind::Integer: return "an integer";
        case Kind::Boolean: return "true or false";
        case Kind::String: return "a string";
    }
    return "";
}

bool matches(const json& v, Kind kind) {
    switch (kind) {
        case Kind::Number: return v.is_number();
        case Kind::Integer: return v.is_number_integer();
        case Kind::Boolean: return v.is_boolean();
        case Kind::String: return v.is_string();
    }
    return false;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

NormConventions ConfigDocument::conventions() const {
    NormConventions conv = NormConventions::integral(run.bounds, run.grid);
    if (phi_norm_sq) conv.phi_norm_sq = *phi_norm_sq;
    if (omega_measure_K) conv.omega_measure_K = *omega_measure_K;
    if (omega_measure_Q) conv.omega_measure_Q = *omega_measure_Q;
    return conv;
}

double ConfigDocument::transient_time() const { return transient ? *transient : 0.1 * end_time(); }

ConfigDocument parse_config(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError({fmt::format("not valid JSON: {}", e.what())});
    }
    if (!root.is_object()) throw ConfigError({"configuration must be a JSON object"});

    std::vector<std::string> errors;
    std::set<std::string> known;
    for (const KeySpec& spec : kKeys) known.insert(spec.name);
    for (const auto& [key, value] : root.items()) {
        if (!known.contains(key)) errors.push_back(fmt::format("unknown key '{}'", key));
    }

    bool typed_ok = true;
    for (const KeySpec& spec : kKeys) {
        const auto it = root.find(spec.name);
        if (it == root.end()) {
            if (spec.required) {
                errors.push_back(fmt::format("missing required key '{}' ({})", spec.name,
                                             describe(spec.kind)));
                typed_ok = false;
            }
            continue;
        }
        if (!matches(*it, spec.kind)) {
            errors.push_back(fmt::format("key '{}' must be {} (got {})", spec.name,
                                         describe(spec.kind), it->dump()));
            typed_ok = false;
        }
    }
    if (!typed_ok) throw ConfigError(std::move(errors));

    auto num = [&](const char* key) { return root.at(key).get<double>(); };
    auto integer = [&](const char* key) { return root.at(key).get<std::int64_t>(); };
    auto int_in_range = [&](const char* key, std::int64_t lo) -> int {
        const auto v = integer(key);
        if (v < lo || v > std::numeric_limits<int>::max()) {
            errors.push_back(fmt::format("key '{}' must be an integer >= {} (got {})", key, lo, v));
            return static_cast<int>(lo);
        }
        return static_cast<int>(v);
    };

    ConfigDocument doc;
    RunConfig& run = doc.run;
    NetworkParams& p = run.params;
    p.eta = num("eta");
    p.sigma = num("sigma");
    p.J = num("J");
    p.k = num("k");
    p.a = num("a");
    p.b = num("b");
    p.c = num("c");
    p.q = num("q");
    p.r = num("r");
    p.P = num("P");
    p.m = int_in_range("m", 2);
    for (auto& e : validate(p)) errors.push_back(std::move(e));

    const double kappa = num("kappa");
    if (kappa > 0.0) {
        run.bounds = NonlinearityBounds::prototype(kappa);
    } else {
        errors.push_back(fmt::format("key 'kappa' must be positive (got {})", kappa));
    }

    run.grid.nx = int_in_range("nx", 3);
    run.grid.ny = int_in_range("ny", 3);
    run.grid.dx = num("dx");
    run.dt = num("dt");
    run.n_steps = int_in_range("n_steps", 1);
    const auto seed = integer("seed");
    if (seed < 0) errors.push_back(fmt::format("key 'seed' must be nonnegative (got {})", seed));
    run.seed = static_cast<std::uint64_t>(seed);
    run.amplitude = num("amplitude");
    if (!(run.amplitude >= 0.0)) {
        errors.push_back(fmt::format("key 'amplitude' must be nonnegative (got {})", run.amplitude));
    }
    if (root.contains("record_every")) run.record_every = int_in_range("record_every", 1);
    if (root.contains("snapshot_every")) run.snapshot_every = int_in_range("snapshot_every", 0);
    if (root.contains("record_initial")) run.record_initial = root["record_initial"].get<bool>();
    if (root.contains("integrator")) {
        const auto name = root["integrator"].get<std::string>();
        if (name == "euler") {
            run.integrator = Integrator::Euler;
        } else if (name == "rk4") {
            run.integrator = Integrator::Rk4;
        } else {
            errors.push_back(
                fmt::format("key 'integrator' must be \"euler\" or \"rk4\" (got \"{}\")", name));
        }
    }
    for (auto& e : validate(run)) {
        // eta is already reported by the parameter check
        if (e.rfind("eta", 0) != 0) errors.push_back(std::move(e));
    }

    auto optional_nonneg = [&](const char* key, std::optional<double>& slot) {
        if (!root.contains(key)) return;
        slot = num(key);
        if (!(*slot >= 0.0)) {
            errors.push_back(fmt::format("key '{}' must be nonnegative (got {})", key, *slot));
        }
    };
    if (root.contains("C_star")) {
        doc.C_star = num("C_star");
        if (!(doc.C_star > 0.0)) {
            errors.push_back(fmt::format("key 'C_star' must be positive (got {})", doc.C_star));
        }
    }
    optional_nonneg("phi_norm_sq", doc.phi_norm_sq);
    optional_nonneg("omega_measure_K", doc.omega_measure_K);
    optional_nonneg("omega_measure_Q", doc.omega_measure_Q);
    optional_nonneg("transient", doc.transient);
    if (doc.transient && *doc.transient > doc.end_time()) {
        errors.push_back(fmt::format("key 'transient' ({}) lies beyond the run end t = {}",
                                     *doc.transient, doc.end_time()));
    }
    if (root.contains("envelope_slack")) {
        doc.envelope_slack = num("envelope_slack");
        if (!(doc.envelope_slack >= 1.0)) {
            errors.push_back(fmt::format("key 'envelope_slack' must be >= 1 (got {})",
                                         doc.envelope_slack));
        }
    }
    if (root.contains("tail_fraction")) {
        doc.tail_fraction = num("tail_fraction");
        if (!(doc.tail_fraction > 0.0 && doc.tail_fraction <= 1.0)) {
            errors.push_back(fmt::format("key 'tail_fraction' must lie in (0, 1] (got {})",
                                         doc.tail_fraction));
        }
    }
    if (root.contains("out_dir")) doc.out_dir = root["out_dir"].get<std::string>();

    if (!errors.empty()) throw ConfigError(std::move(errors));
    return doc;
}

ConfigDocument load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError({fmt::format("cannot read config file '{}'", path.string())});
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string to_json(const ConfigDocument& doc) {
    const RunConfig& run = doc.run;
    const NetworkParams& p = run.params;
    json j = json::object();
    j["eta"] = p.eta;
    j["sigma"] = p.sigma;
    j["J"] = p.J;
    j["k"] = p.k;
    j["a"] = p.a;
    j["b"] = p.b;
    j["c"] = p.c;
    j["q"] = p.q;
    j["r"] = p.r;
    j["P"] = p.P;
    j["m"] = p.m;
    j["kappa"] = run.bounds.kappa;
    j["nx"] = run.grid.nx;
    j["ny"] = run.grid.ny;
    j["dx"] = run.grid.dx;
    j["dt"] = run.dt;
    j["n_steps"] = run.n_steps;
    j["seed"] = run.seed;
    j["amplitude"] = run.amplitude;
    j["record_every"] = run.record_every;
    j["snapshot_every"] = run.snapshot_every;
    j["integrator"] = run.integrator == Integrator::Rk4 ? "rk4" : "euler";
    j["record_initial"] = run.record_initial;
    j["C_star"] = doc.C_star;
    if (doc.phi_norm_sq) j["phi_norm_sq"] = *doc.phi_norm_sq;
    if (doc.omega_measure_K) j["omega_measure_K"] = *doc.omega_measure_K;
    if (doc.omega_measure_Q) j["omega_measure_Q"] = *doc.omega_measure_Q;
    j["envelope_slack"] = doc.envelope_slack;
    if (doc.transient) j["transient"] = *doc.transient;
    j["tail_fraction"] = doc.tail_fraction;
    j["out_dir"] = doc.out_dir;
    return j.dump(2) + "\n";
}

ConfigDocument paper_config() {
    ConfigDocument doc;
    RunConfig& run = doc.run;
    run.params = NetworkParams{
        .eta = 10.0, .sigma = 0.01, .J = 0.5, .k = 0.25, .a = 0.35, .b = 0.35,
        .c = 0.7,    .q = 0.35,     .r = 10.0, .P = 1.45, .m = 4,
    };
    run.bounds = NonlinearityBounds::prototype(1.0);
    run.grid = Grid2D{32, 32, 1.0};
    run.dt = 0.00025;
    run.n_steps = 10000;
    run.seed = 20240501;
    run.amplitude = 0.05;
    run.record_every = 10;
    run.snapshot_every = 0;
    const NormConventions conv = NormConventions::reconciled();
    doc.phi_norm_sq = conv.phi_norm_sq;
    doc.omega_measure_K = conv.omega_measure_K;
    doc.omega_measure_Q = conv.omega_measure_Q;
    doc.transient = 0.25;
    return doc;
}

ConfigDocument paper_tables_config() {
    ConfigDocument doc = paper_config();
    doc.run.params.k = 5.0;
    return doc;
}

}  // namespace fhn
