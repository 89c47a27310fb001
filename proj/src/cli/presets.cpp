#include "tvcqed/cli/scenario.hpp"

namespace tvcqed::cli {

// Figure scenarios at reduced resolution. Frequencies in units of the mean Rabi frequency (fig2,
// fig3), the modulation frequency (fig4 to fig6) or the plasma frequency (fig7).
const std::map<std::string, std::string>& presets() {
    static const std::map<std::string, std::string> table{
        {"fig2", R"({
  "kind": "jc_eigen_scan",
  "samples": 41,
  "parameters": {"rabi": 1.0}
})"},
        {"fig3", R"({
  "kind": "trimode_closed",
  "samples": 81,
  "parameters": {
    "mode": "eigenstructure_scan",
    "rabi_a": 1.0,
    "rabi_b": 1.0,
    "mode_splitting": 5.0,
    "detuning_min": -10.0,
    "detuning_max": 10.0
  }
})"},
        {"fig4", R"({
  "kind": "trimode_reduced",
  "samples": 51,
  "parameters": {
    "mode": "cumulative_rabi_scan",
    "rabi": 1.0,
    "mod_frequency": 1.0,
    "mean_frequency": 100.0,
    "x_min": 0.0,
    "x_max": 10.0
  }
})"},
        {"fig5", R"({
  "kind": "trimode_closed",
  "samples": 61,
  "parameters": {
    "omega_a": {"type": "sinusoidal", "mean": 100.0, "depth": 1.0, "mod_frequency": 1.0},
    "omega_b": {"type": "sinusoidal", "mean": 99.0, "depth": 1.0, "mod_frequency": 1.0},
    "transition": 100.0,
    "rabi_a": 0.1,
    "rabi_b": 0.1,
    "init": {"c100": 0.5, "c010": 0.8660254037844386},
    "t_end": 360.0,
    "reference": true
  }
})"},
        {"fig6", R"({
  "kind": "steady_quanta_scan",
  "parameters": {
    "omega_a": {"type": "sinusoidal", "mean": 100.0, "depth": 1.0, "mod_frequency": 1.0},
    "omega_b": {"type": "sinusoidal", "mean": 99.0, "depth": 1.0, "mod_frequency": 1.0},
    "transition": 100.0,
    "rabi_a": 0.1,
    "rabi_b": 0.1,
    "abs_max": 3.0,
    "n_abs": 31,
    "n_arg": 37
  }
})"},
        {"fig7", R"({
  "kind": "plasmon_scan",
  "samples": 65,
  "parameters": {
    "k": 1.0,
    "half_height": {"type": "sinusoidal", "mean": 1.0, "depth": 0.1, "mod_frequency": 1.0,
                    "phase": 3.141592653589793},
    "cladding": {"type": "drude", "plasma_frequency": 1.0},
    "dipole": [0.0, 0.0, 1.0],
    "t_end": 6.283185307179586
  }
})"},
    };
    return table;
}

json preset(const std::string& name) {
    const auto& all = presets();
    const auto it = all.find(name);
    if (it == all.end()) {
        std::string known;
        for (const auto& [k, v] : all) known += " " + k;
        throw ConfigError(std::vector<ConfigIssue>{{"--preset", "unknown preset \"" + name + "\"; known:" + known}});
    }
    json doc = json::parse(it->second);
    doc["name"] = name;
    return doc;
}

}  // namespace tvcqed::cli
