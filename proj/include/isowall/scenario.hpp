#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

#include "isowall/floquet.hpp"
#include "isowall/potential.hpp"

namespace isowall {

using ordered_json = nlohmann::ordered_json;

// Flat sectioned key/value scenario description. Parsed from INI-style text
// (strict: unknown sections/keys, type mismatches and duplicates are errors)
// or recovered from a run manifest's "config" object for re-runs.
class ScenarioConfig {
  public:
    static ScenarioConfig from_text(const std::string& text);
    static ScenarioConfig from_file(const std::string& path);  // .json manifest or INI
    static ScenarioConfig from_json(const ordered_json& j);

    bool has(const std::string& section, const std::string& key) const;
    double num(const std::string& section, const std::string& key) const;
    double num_or(const std::string& section, const std::string& key, double fallback) const;
    long integer(const std::string& section, const std::string& key) const;
    long integer_or(const std::string& section, const std::string& key, long fallback) const;
    bool boolean_or(const std::string& section, const std::string& key, bool fallback) const;
    std::string str_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;

    void set(const std::string& section, const std::string& key, const ordered_json& value);
    const ordered_json& json() const { return data_; }

    // Recorded in the manifest's invocation block; nothing consumes it.
    std::optional<long> seed;

  private:
    ordered_json data_;
};

// Lattice + gap solution + wall-family parameters resolved from a config.
struct SynthesisPipeline {
    PeriodicPotential lattice;
    EvanescentSolution chi;
    std::complex<double> mu;
    double alpha0_raw = 0.0;    // before any calibration rescale
    double scale_factor = 1.0;  // c applied to chi for the alpha0_target convention
    double alpha0 = 0.0;        // after rescale
    double alpha = 0.0;         // resolved (config value or 1.25 * alpha0)
};

PeriodicPotential lattice_from_config(const ScenarioConfig& cfg);
SimulationWindow window_from_config(const ScenarioConfig& cfg);
SynthesisPipeline build_synthesis(ScenarioConfig& cfg);  // writes resolved values back

// Commands. Each writes CSV outputs plus manifest.json into out_dir and
// returns a process exit code (0 = success). cmd_scatter returns 2 when the
// wraparound guard stopped the run early (partial snapshots are kept).
int cmd_bands(ScenarioConfig cfg, const std::string& out_dir);
int cmd_synth(ScenarioConfig cfg, const std::string& out_dir);
int cmd_scatter(ScenarioConfig cfg, const std::string& out_dir, bool control);
int cmd_surface(ScenarioConfig cfg, const std::string& out_dir);
int cmd_verify(ScenarioConfig cfg);

}  // namespace isowall
