#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "builders.hpp"
#include "tvcqed/cli/scenario.hpp"
#include "tvcqed/jaynes_cummings.hpp"
#include "tvcqed/lindblad.hpp"

namespace tvcqed::cli {

using namespace detail;

namespace {

void add_warnings(Table& t, const std::vector<std::string>& w) {
    for (const auto& s : w) t.notes.push_back("warning: " + s);
}

std::string describe_complex(cplx z) {
    std::ostringstream o;
    o.precision(10);
    o << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return o.str();
}

void describe_reduced(Table& t, const ReducedSystem& rs) {
    t.notes.push_back("R_a0 = " + describe_complex(rs.r_a0) + ", R_bm = " + describe_complex(rs.r_bm));
    std::ostringstream o;
    o.precision(12);
    o << "cumulative Rabi frequency = " << rs.cumulative_rabi << ", validity ratio max|Omega_R|/Omega = "
      << rs.validity_ratio;
    t.notes.push_back(o.str());
    add_warnings(t, rs.warnings);
}

Table jc_eigen_scan(const Scenario& s) {
    const json& p = s.resolved.at("parameters");
    const double rabi = p.at("rabi");
    Table t{s.name, {"delta_over_rabi", "nu1", "nu2"}, {}, {"nu1, nu2 in units of rabi; delta = omega - W"}};
    for (double d : numerics::linspace(p.at("delta_min"), p.at("delta_max"), s.samples)) {
        const auto e = jc_eigenmodes(d, rabi);
        t.rows.push_back({d / rabi, e.nu1 / rabi, e.nu2 / rabi});
    }
    return t;
}

Table jc_sweep(const Scenario& s) {
    const json& p = s.resolved.at("parameters");
    const double rabi = p.at("rabi");
    std::optional<double> window;
    if (!p.at("window").is_null()) window = p.at("window").get<double>();
    Table t{s.name, {"adiabaticity", "rate", "probability", "landau_zener", "ln_p_rel_error"}, {}, {}};
    for (double x : p.at("adiabaticity").get<std::vector<double>>()) {
        const double rate = 2.0 * std::numbers::pi * rabi * rabi / x;
        const auto r = sweep_transition(rabi, rate, window);
        const double lz = landau_zener_probability(rabi, rate);
        t.rows.push_back({x, rate, r.probability, lz, std::abs(std::log(r.probability) / std::log(lz) - 1.0)});
    }
    return t;
}

numerics::IntegratorConfig tolerances(const json& p) {
    numerics::IntegratorConfig cfg;
    cfg.rel_tol = p.at("rel_tol");
    cfg.abs_tol = p.at("abs_tol");
    return cfg;
}

Table trimode_closed(const Scenario& s) {
    const json& p = s.resolved.at("parameters");
    if (p.at("mode") == "eigenstructure_scan") {
        const auto target = p.at("target") == "atom" ? ModulationTarget::atom : ModulationTarget::cavity;
        const auto grid = numerics::linspace(p.at("detuning_min"), p.at("detuning_max"), s.samples);
        const auto b = eigenstructure_vs_detuning(complex_from(p.at("rabi_a")), complex_from(p.at("rabi_b")),
                                                  p.at("mode_splitting"), grid, target);
        Table t{s.name,
                {"detuning", "nu1", "nu2", "nu3", "w1_001", "w1_100", "w1_010", "w2_001", "w2_100", "w2_010",
                 "w3_001", "w3_100", "w3_010"},
                {},
                {"frequencies relative to (omega_a + omega_b)/2 + W at omega_a = W; weights are |C| per branch"}};
        for (std::size_t i = 0; i < grid.size(); ++i) {
            std::vector<double> row{b.detuning[i]};
            for (int k = 0; k < 3; ++k) row.push_back(b.frequency[i][k]);
            for (int k = 0; k < 3; ++k) {
                for (int c = 0; c < 3; ++c) row.push_back(b.weight[i][k][c]);
            }
            t.rows.push_back(std::move(row));
        }
        return t;
    }
    const auto params = trimode_from(p);
    const auto init = state_from(p.at("init"));
    const auto ts = time_grid(p, s.samples);
    const bool reference = p.at("reference");
    Table t{s.name, {"t", "p000", "p001", "p100", "p010", "norm"}, {}, {}};
    add_warnings(t, params.warnings());
    std::optional<ReducedSystem> rs;
    if (reference) {
        rs = reduced_resonant_system(params);
        describe_reduced(t, *rs);
        for (const char* c : {"ref_p001", "ref_p100", "ref_p010"}) t.columns.push_back(c);
    }
    const auto tr = integrate_trimode_full(params, init, ts, tolerances(p));
    for (const auto& smp : tr.samples) {
        const auto pop = smp.lab.populations();
        std::vector<double> row{smp.t, pop[0], pop[1], pop[2], pop[3], smp.lab.norm()};
        if (rs) {
            const auto ref = analytic_closed_solution(*rs, init, smp.t).populations();
            row.insert(row.end(), {ref[1], ref[2], ref[3]});
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table trimode_reduced(const Scenario& s) {
    const json& p = s.resolved.at("parameters");
    if (p.at("mode") == "cumulative_rabi_scan") {
        const double rabi = p.at("rabi"), mod = p.at("mod_frequency"), wbar = p.at("mean_frequency");
        const int m = p.at("harmonic_order");
        Table t{s.name, {"dw_over_omega", "cumulative_rabi_over_rabi"}, {}, {}};
        for (double x : numerics::linspace(p.at("x_min"), p.at("x_max"), s.samples)) {
            TrimodeParams tp;
            tp.omega_a = ModulationSchedule::sinusoidal(wbar, x * mod, mod);
            tp.omega_b = ModulationSchedule::sinusoidal(wbar - m * mod, x * mod, mod);
            tp.transition = ModulationSchedule::constant(wbar);
            tp.rabi_a = rabi;
            tp.rabi_b = rabi;
            tp.harmonic_order = m;
            t.rows.push_back({x, reduced_resonant_system(tp).cumulative_rabi / rabi});
        }
        return t;
    }
    const auto params = trimode_from(p);
    const auto rs = reduced_resonant_system(params);
    const auto init = state_from(p.at("init"));
    Table t{s.name, {"t", "p001", "p100", "p010"}, {}, {}};
    describe_reduced(t, rs);
    for (double time : time_grid(p, s.samples)) {
        const auto pop = analytic_closed_solution(rs, init, time).populations();
        t.rows.push_back({time, pop[1], pop[2], pop[3]});
    }
    return t;
}

Table trimode_open(const Scenario& s) {
    const json& p = s.resolved.at("parameters");
    const auto params = trimode_from(p);
    const auto init = state_from(p.at("init"));
    const auto rates = rates_from(p.at("rates"));
    const auto noise = noise_from(p.at("noise_model"));
    const auto ts = time_grid(p, s.samples);
    const std::string engine = p.at("engine");
    Table t{s.name, {"t", "p000", "p001", "p100", "p010", "trace"}, {}, {}};
    add_warnings(t, params.warnings());

    if (engine == "lindblad") {
        const int n_max = p.at("n_max");
        const ProductBasis basis(n_max, n_max);
        const Lindbladian l(params, rates, basis);
        const auto lab0 = to_lab(params, init, ts.front());
        const auto rho0 = embed_single_excitation(basis, DyadicState::pure(lab0).m);
        const auto series = integrate_master(l, rho0, ts, tolerances(p));
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const auto& rho = series.states[i];
            const Eigen::Matrix4cd b = single_excitation_block(basis, rho);
            t.rows.push_back({ts[i], b(0, 0).real(), b(1, 1).real(), b(2, 2).real(), b(3, 3).real(),
                              rho.trace().real()});
        }
        return t;
    }

    std::optional<ReducedSystem> rs;
    if (p.at("hamiltonian") == "reduced") {
        rs = reduced_resonant_system(params);
        describe_reduced(t, *rs);
    }
    const InteractionHamiltonian h = rs ? InteractionHamiltonian(*rs) : InteractionHamiltonian(params);

    if (engine == "trajectories") {
        TrajectoryOptions opts;
        opts.n_traj = p.at("n_traj");
        opts.seed = s.seed;
        const auto e = integrate_trajectories(h, rates, noise, init, ts, opts);
        t.columns = {"t", "p000", "p001", "p100", "p010", "norm", "se_p000", "se_p001", "se_p100", "se_p010", "se_norm"};
        std::ostringstream o;
        o.precision(12);
        o << "trajectories: " << e.n_traj << ", step " << e.dt;
        t.notes.push_back(o.str());
        for (std::size_t i = 0; i < e.times.size(); ++i) {
            const auto& m = e.mean_population[i];
            const auto& se = e.stderr_population[i];
            t.rows.push_back({e.times[i], m[0], m[1], m[2], m[3], e.mean_norm[i], se[0], se[1], se[2], se[3],
                              e.stderr_norm[i]});
        }
        return t;
    }

    const auto series = integrate_dyadics(h, rates, noise, DyadicState::pure(init), ts, tolerances(p));
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const auto& m = series.states[i];
        t.rows.push_back({ts[i], m(0, 0).real(), m(1, 1).real(), m(2, 2).real(), m(3, 3).real(), m.trace().real()});
    }
    return t;
}

Table steady_quanta_scan(const Scenario& s) {
    const json& p = s.resolved.at("parameters");
    const auto rs = reduced_resonant_system(trimode_from(p));
    Table t{s.name, {"abs_z", "arg_z", "quanta"}, {}, {"Z = c010(0) / c100(0), atom initially in the ground state"}};
    describe_reduced(t, rs);
    const cplx best = transparency_condition(rs, 1.0);
    std::ostringstream o;
    o.precision(12);
    o << "optimal Z: |Z| = " << std::abs(best) << ", arg Z = " << std::arg(best);
    t.notes.push_back(o.str());
    const auto mags = numerics::linspace(p.at("abs_min"), p.at("abs_max"), static_cast<std::size_t>(p.at("n_abs")));
    const auto args = numerics::linspace(p.at("arg_min"), p.at("arg_max"), static_cast<std::size_t>(p.at("n_arg")));
    for (double a : mags) {
        for (double phi : args) {
            const cplx z = std::polar(a, phi);
            const double c100 = 1.0 / std::sqrt(1.0 + a * a);
            t.rows.push_back({a, phi, steady_state_quanta({0.0, 0.0, c100, z * c100}, rs)});
        }
    }
    return t;
}

Table plasmon_scan(const Scenario& s) {
    const json& p = s.resolved.at("parameters");
    const auto g = geometry_from(p);
    const auto ts = time_grid(p, s.samples);
    const auto rows = plasmon_table(g, vector3_from(p.at("dipole")), parity_from(p.at("parity")), ts);
    Table t{s.name, {"t", "omega_s", "omega_as", "field_s", "field_as", "rabi"}, {}, {}};
    add_warnings(t, plasmon_mode(g, ts.front(), parity_from(p.at("parity"))).warnings);
    for (const auto& r : rows) t.rows.push_back({r.t, r.omega_s, r.omega_as, r.field_s, r.field_as, r.rabi});
    return t;
}

std::string format_number(double v) {
    if (v == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

}  // namespace

std::vector<Table> run_scenario(const Scenario& s) {
    if (s.kind == "jc_eigen_scan") return {jc_eigen_scan(s)};
    if (s.kind == "jc_sweep") return {jc_sweep(s)};
    if (s.kind == "trimode_closed") return {trimode_closed(s)};
    if (s.kind == "trimode_reduced") return {trimode_reduced(s)};
    if (s.kind == "trimode_open") return {trimode_open(s)};
    if (s.kind == "steady_quanta_scan") return {steady_quanta_scan(s)};
    if (s.kind == "plasmon_scan") return {plasmon_scan(s)};
    throw ValidationError("unknown scenario kind " + s.kind);
}

std::string render_csv(const Scenario& s, const Table& t) {
    std::ostringstream o;
    o << "# tvcqed " << TVCQED_VERSION << "\n";
    o << "# kind: " << s.kind << "\n";
    o << "# seed: " << s.seed << "\n";
    o << "# config: " << s.resolved.dump() << "\n";
    for (const auto& n : t.notes) o << "# " << n << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) o << (i ? "," : "") << t.columns[i];
    o << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) o << (i ? "," : "") << format_number(row[i]);
        o << "\n";
    }
    return o.str();
}

std::string render_json(const Scenario& s, const std::vector<Table>& tables) {
    json doc{{"artifact", "tvcqed"}, {"version", TVCQED_VERSION}, {"kind", s.kind}, {"seed", s.seed},
             {"config", s.resolved}};
    json out = json::array();
    for (const auto& t : tables) {
        out.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", t.rows}, {"notes", t.notes}});
    }
    doc["tables"] = out;
    return doc.dump(2) + "\n";
}

std::vector<std::filesystem::path> write_outputs(const Scenario& s, const std::vector<Table>& tables) {
    namespace fs = std::filesystem;
    const fs::path dir(s.out_dir);
    fs::create_directories(dir);
    std::vector<fs::path> written;
    auto emit = [&](const fs::path& path, const std::string& text) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write " + path.string());
        out << text;
        written.push_back(path);
    };
    for (auto f : s.formats) {
        if (f == OutputFormat::json) {
            emit(dir / (s.name + ".json"), render_json(s, tables));
            continue;
        }
        for (const auto& t : tables) {
            const std::string stem = tables.size() == 1 ? s.name : s.name + "_" + t.name;
            emit(dir / (stem + ".csv"), render_csv(s, t));
        }
    }
    return written;
}

}  // namespace tvcqed::cli
