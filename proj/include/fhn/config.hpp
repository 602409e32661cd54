#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fhn/network.hpp"
#include "fhn/theory.hpp"

namespace fhn {

/// A run configuration plus the theory inputs and output settings.
///
/// JSON schema (flat object, unknown keys rejected):
///   required numbers   eta sigma J k a b c q r P kappa dx dt amplitude
///   required integers  m nx ny n_steps seed
///   optional           record_every (1), snapshot_every (0),
///                      integrator ("euler" | "rk4", "euler"),
///                      record_initial (true), C_star (0.4),
///                      phi_norm_sq, omega_measure_K, omega_measure_Q
///                      (default: integral convention on the run grid),
///                      envelope_slack (1.5), transient (10% of the run),
///                      tail_fraction (0.2), out_dir (".")
struct ConfigDocument {
    RunConfig run;
    double C_star = kDefaultGagliardoNirenberg;
    std::optional<double> phi_norm_sq;
    std::optional<double> omega_measure_K;
    std::optional<double> omega_measure_Q;
    double envelope_slack = 1.5;
    std::optional<double> transient;
    double tail_fraction = 0.2;
    std::string out_dir = ".";

    [[nodiscard]] NormConventions conventions() const;
    [[nodiscard]] double transient_time() const;
    [[nodiscard]] double end_time() const {
        return static_cast<double>(run.n_steps) * run.dt;
    }
};

/// Carries every problem found in a document, not just the first.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> errors);
    [[nodiscard]] const std::vector<std::string>& errors() const noexcept { return errors_; }

private:
    std::vector<std::string> errors_;
};

[[nodiscard]] ConfigDocument parse_config(std::string_view text);
[[nodiscard]] ConfigDocument load_config(const std::filesystem::path& path);

/// Serializes back to the JSON schema above (all keys spelled out).
[[nodiscard]] std::string to_json(const ConfigDocument& doc);

/// The published 32x32 four-neuron example with k = 0.25, the coupling that
/// reproduces the printed constants, and the reconciled norm conventions.
[[nodiscard]] ConfigDocument paper_config();

/// Same example with k = 5, the coupling that reproduces the published
/// point samples after 10000 steps.
[[nodiscard]] ConfigDocument paper_tables_config();

}  // namespace fhn
