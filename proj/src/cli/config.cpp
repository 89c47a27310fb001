#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "builders.hpp"
#include "config_reader.hpp"
#include "tvcqed/cli/scenario.hpp"

namespace tvcqed::cli {

using detail::Bound;
using detail::Issues;
using detail::ObjectReader;

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
    std::ostringstream msg;
    msg << issues.size() << " config error" << (issues.size() == 1 ? "" : "s") << ":";
    for (const auto& i : issues) msg << "\n  " << i.path << ": " << i.message;
    return msg.str();
}

void read_trimode(ObjectReader& p) {
    p.schedule("omega_a");
    p.schedule("omega_b");
    p.schedule("transition");
    p.complex("rabi_a", std::nullopt);
    p.complex("rabi_b", std::nullopt);
    p.choice("target", "cavity", {"cavity", "atom"});
    p.integer("harmonic_order", 1, -1000);
}

void read_state(ObjectReader& p, const char* key = "init") {
    p.object(key, true, [](ObjectReader& s) {
        for (const char* c : {"c000", "c001", "c100", "c010"}) s.complex(c, cplx(0.0));
    });
}

void read_rates(ObjectReader& p) {
    p.object("rates", false, [](ObjectReader& r) {
        for (const char* k : {"gamma", "gamma_el", "mu_a", "mu_b", "temperature_atom", "temperature_em"}) {
            r.number(k, 0.0, Bound::non_negative);
        }
    });
}

void read_span(ObjectReader& p) {
    p.number("t_start", 0.0);
    p.number("t_end", std::nullopt);
}

void read_tolerances(ObjectReader& p) {
    p.number("rel_tol", 1e-9, Bound::positive);
    p.number("abs_tol", 1e-12, Bound::positive);
}

int default_samples(const std::string&) { return 201; }

void read_parameters(const std::string& kind, ObjectReader& p) {
    if (kind == "jc_eigen_scan") {
        const double rabi = p.number("rabi", std::nullopt, Bound::positive);
        p.number("delta_min", -5.0 * rabi);
        p.number("delta_max", 5.0 * rabi);
    } else if (kind == "jc_sweep") {
        p.number("rabi", std::nullopt, Bound::positive);
        p.numbers("adiabaticity", std::vector<double>{0.2, 0.5, 1.0, 2.0, 5.0}, 1, Bound::positive);
        p.optional_number("window", Bound::positive);
    } else if (kind == "trimode_closed") {
        const std::string mode = p.choice("mode", "time_series", {"time_series", "eigenstructure_scan"});
        if (mode == "eigenstructure_scan") {
            const cplx ra = p.complex("rabi_a", std::nullopt);
            const cplx rb = p.complex("rabi_b", std::nullopt);
            p.number("mode_splitting", std::nullopt);
            p.choice("target", "cavity", {"cavity", "atom"});
            const double scale = std::max(std::abs(ra), std::abs(rb));
            p.number("detuning_min", -10.0 * scale);
            p.number("detuning_max", 10.0 * scale);
        } else {
            read_trimode(p);
            read_state(p);
            read_span(p);
            read_tolerances(p);
            p.boolean("reference", false);
        }
    } else if (kind == "trimode_reduced") {
        const std::string mode = p.choice("mode", "time_series", {"time_series", "cumulative_rabi_scan"});
        if (mode == "cumulative_rabi_scan") {
            p.number("rabi", std::nullopt, Bound::positive);
            const double mod = p.number("mod_frequency", std::nullopt, Bound::positive);
            p.number("mean_frequency", 100.0 * mod, Bound::positive);
            p.integer("harmonic_order", 1, -1000);
            p.number("x_min", 0.0, Bound::non_negative);
            p.number("x_max", 10.0, Bound::non_negative);
        } else {
            read_trimode(p);
            read_state(p);
            read_span(p);
        }
    } else if (kind == "trimode_open") {
        read_trimode(p);
        read_state(p);
        read_rates(p);
        p.choice("noise_model", "zero_temperature", {"zero_temperature", "population_preserving", "two_level_T1T2"});
        p.choice("engine", "dyadic", {"dyadic", "trajectories", "lindblad"});
        p.choice("hamiltonian", "full", {"full", "reduced"});
        read_span(p);
        read_tolerances(p);
        p.integer("n_traj", 1000, 1);
        p.integer("n_max", 1, 1);
    } else if (kind == "steady_quanta_scan") {
        read_trimode(p);
        p.number("abs_min", 0.0, Bound::non_negative);
        p.number("abs_max", 3.0, Bound::positive);
        p.integer("n_abs", 61, 2);
        p.number("arg_min", -std::numbers::pi);
        p.number("arg_max", std::numbers::pi);
        p.integer("n_arg", 73, 2);
    } else if (kind == "plasmon_scan") {
        p.number("k", std::nullopt, Bound::positive);
        p.number("area", 1.0, Bound::positive);
        p.schedule("half_height");
        p.number("gap_permittivity", 1.0, Bound::positive);
        p.object("cladding", true, [](ObjectReader& c) {
            const std::string type = c.choice("type", "drude", {"drude", "tabulated"});
            if (type == "tabulated") {
                c.numbers("omega", std::nullopt, 2, Bound::positive);
                c.numbers("epsilon", std::nullopt, 2);
            } else {
                c.number("plasma_frequency", std::nullopt, Bound::positive);
            }
        });
        p.number("hbar", 1.0, Bound::positive);
        p.optional_number("speed_of_light", Bound::positive);
        p.numbers("dipole", std::vector<double>{0.0, 0.0, 1.0}, 3);
        p.choice("parity", "symmetric", {"symmetric", "antisymmetric"});
        read_span(p);
    }
}

// Module-level preconditions on the resolved parameters.
void check_preconditions(const Scenario& s, Issues& issues) {
    using namespace detail;
    const json& p = s.resolved.at("parameters");
    const std::string where = "parameters";
    auto guard = [&](const std::string& path, auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            issues.add(path, e.what());
        }
    };
    const std::string mode = p.value("mode", std::string());

    if (p.contains("init")) {
        const double n = state_from(p.at("init")).norm();
        if (std::abs(n - 1.0) > 1e-9) {
            std::ostringstream msg;
            msg << "initial state is not normalised (sum |c|^2 = " << n << ")";
            issues.add(where + ".init", msg.str());
        }
    }
    if (p.contains("t_end") && !(p.at("t_end").get<double>() > p.at("t_start").get<double>())) {
        issues.add(where + ".t_end", "must exceed t_start");
    }
    if (p.contains("omega_a")) guard(where, [&] { trimode_from(p).validate(); });

    if (s.kind == "jc_eigen_scan" && !(p.at("delta_max").get<double>() > p.at("delta_min").get<double>())) {
        issues.add(where + ".delta_max", "must exceed delta_min");
    }
    if (s.kind == "trimode_reduced" && mode == "time_series") {
        guard(where, [&] { reduced_resonant_system(trimode_from(p)); });
    }
    if (s.kind == "trimode_reduced" && mode == "cumulative_rabi_scan" &&
        !(p.at("x_max").get<double>() > p.at("x_min").get<double>())) {
        issues.add(where + ".x_max", "must exceed x_min");
    }
    if (s.kind == "trimode_closed" && mode == "time_series" && p.at("reference").get<bool>()) {
        guard(where, [&] { reduced_resonant_system(trimode_from(p)); });
    }
    if (s.kind == "steady_quanta_scan") {
        guard(where, [&] {
            const auto rs = reduced_resonant_system(trimode_from(p));
            if (rs.r_bm == cplx(0.0)) throw ValidationError("R_bm = 0: the scan needs a coupled mode b");
        });
        if (!(p.at("abs_max").get<double>() > p.at("abs_min").get<double>())) {
            issues.add(where + ".abs_max", "must exceed abs_min");
        }
    }
    if (s.kind == "trimode_open") {
        const auto r = rates_from(p.at("rates"));
        const std::string engine = p.at("engine");
        const std::string noise = p.at("noise_model");
        if (engine == "lindblad" && p.at("hamiltonian") != "full") {
            issues.add(where + ".hamiltonian", "the lindblad engine works in the lab frame and needs \"full\"");
        }
        if (engine == "lindblad" && noise != "zero_temperature" && noise != "two_level_T1T2") {
            issues.add(where + ".noise_model", "the lindblad engine has no counterpart for " + noise);
        }
        if (engine == "trajectories" && (!r.zero_temperature() || noise != "zero_temperature")) {
            issues.add(where + ".engine",
                       "trajectory sampling supports only the zero_temperature model at T = 0; use engine \"dyadic\"");
        }
        if (noise == "zero_temperature" && !r.zero_temperature()) {
            issues.add(where + ".noise_model", "zero_temperature model with nonzero reservoir temperatures");
        }
        if (noise == "two_level_T1T2" && (r.mu_a != 0.0 || r.mu_b != 0.0)) {
            issues.add(where + ".rates", "two_level_T1T2 describes the emitter only; set mu_a = mu_b = 0");
        }
        if (p.at("hamiltonian") == "reduced") guard(where, [&] { reduced_resonant_system(trimode_from(p)); });
    }
    if (s.kind == "plasmon_scan") {
        guard(where, [&] {
            const auto g = geometry_from(p);
            g.validate();
            for (double t : time_grid(p, s.samples)) g.kd(t);
        });
    }
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : ValidationError(join_issues(issues)), issues_(std::move(issues)) {}

Scenario validate_config(const json& doc) {
    Issues issues;
    ObjectReader root(issues, doc, "");
    Scenario s;
    s.kind = root.choice("kind", std::nullopt,
                         {"jc_eigen_scan", "jc_sweep", "trimode_closed", "trimode_reduced", "trimode_open",
                          "steady_quanta_scan", "plasmon_scan"});
    s.name = root.string("name", s.kind.empty() ? std::string("scenario") : s.kind);
    s.seed = static_cast<std::uint64_t>(root.integer("seed", 0, 0));
    s.samples = static_cast<int>(root.integer("samples", default_samples(s.kind), 2));
    root.object("output", false, [&](ObjectReader& o) {
        s.out_dir = o.string("dir", ".");
        o.mark_consumed("formats");
        std::vector<std::string> formats{"csv"};
        if (doc.is_object() && doc.contains("output") && doc["output"].is_object() &&
            doc["output"].contains("formats")) {
            const auto& f = doc["output"]["formats"];
            formats.clear();
            if (!f.is_array() || f.empty()) {
                issues.add("output.formats", "expected a non-empty array of \"csv\" / \"json\"");
            } else {
                for (std::size_t i = 0; i < f.size(); ++i) {
                    if (f[i] != "csv" && f[i] != "json") {
                        issues.add("output.formats[" + std::to_string(i) + "]", "expected \"csv\" or \"json\"");
                    } else {
                        formats.push_back(f[i]);
                    }
                }
            }
        }
        s.formats.clear();
        for (const auto& f : formats) s.formats.push_back(f == "json" ? OutputFormat::json : OutputFormat::csv);
        o.out()["formats"] = formats;
    });
    if (!s.kind.empty()) {
        root.object("parameters", true, [&](ObjectReader& p) { read_parameters(s.kind, p); });
    } else {
        root.mark_consumed("parameters");
    }
    root.finish();
    if (!issues.empty()) throw ConfigError(issues.list());

    s.resolved = root.out();
    check_preconditions(s, issues);
    if (!issues.empty()) throw ConfigError(issues.list());
    return s;
}

Scenario load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(std::vector<ConfigIssue>{{path.string(), "cannot open config file"}});
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::vector<ConfigIssue>{{path.string(), std::string("malformed JSON: ") + e.what()}});
    }
    return validate_config(doc);
}

}  // namespace tvcqed::cli
