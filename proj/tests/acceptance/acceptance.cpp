// Acceptance suite: one PASS/FAIL line per criterion, with the measured figures and runtime.
#include <CLI11.hpp>
#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tvcqed/cli/scenario.hpp"
#include "tvcqed/jaynes_cummings.hpp"
#include "tvcqed/lindblad.hpp"
#include "tvcqed/open_system.hpp"
#include "tvcqed/plasmon.hpp"
#include "tvcqed/trimode.hpp"

using namespace tvcqed;
using numerics::linspace;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    double budget_s;
    std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

TrimodeParams resonant_params(double rabi, double wbar, double mod = 1.0, double depth = 1.0, int m = 1) {
    TrimodeParams p;
    p.omega_a = ModulationSchedule::sinusoidal(wbar, depth, mod);
    p.omega_b = ModulationSchedule::sinusoidal(wbar - m * mod, depth, mod);
    p.transition = ModulationSchedule::constant(wbar);
    p.rabi_a = rabi;
    p.rabi_b = rabi;
    p.harmonic_order = m;
    return p;
}

cli::Table run_preset(const std::string& name) {
    return cli::run_scenario(cli::validate_config(cli::preset(name))).front();
}

numerics::IntegratorConfig tight() {
    numerics::IntegratorConfig cfg;
    cfg.rel_tol = 1e-11;
    cfg.abs_tol = 1e-13;
    return cfg;
}

Outcome anticrossing() {
    // Preset rows are in units of the coupling (rabi = 1).
    const auto t = run_preset("fig2");
    double worst = 0.0, gap_err = std::numeric_limits<double>::infinity();
    for (const auto& r : t.rows) {
        const double root = std::sqrt(0.25 * r[0] * r[0] + 1.0);
        worst = std::max({worst, std::abs(std::max(r[1], r[2]) - (0.5 * r[0] + root)),
                          std::abs(std::min(r[1], r[2]) - (0.5 * r[0] - root))});
        if (r[0] == 0.0) gap_err = std::abs(std::abs(r[1] - r[2]) - 2.0);
    }
    for (double delta : linspace(-3.0, 3.0, 61)) {
        const cplx rabi = std::polar(0.37, 0.8);
        const auto e = jc_eigenmodes(delta, rabi);
        const double root = std::sqrt(0.25 * delta * delta + std::norm(rabi));
        worst = std::max({worst, std::abs(std::max(e.nu1, e.nu2) - (0.5 * delta + root)),
                          std::abs(std::min(e.nu1, e.nu2) - (0.5 * delta - root))});
    }
    return {worst < 1e-12 && gap_err < 1e-12,
            fmt("max deviation %.2e, gap error at delta=0 %.2e (tol 1e-12)", worst, gap_err)};
}

Outcome landau_zener() {
    const double rabi = 1.0;
    double worst = 0.0;
    std::ostringstream per;
    for (double a : {0.2, 0.5, 1.0, 2.0, 5.0}) {
        const double rate = 2.0 * pi * rabi * rabi / a;
        const double p = sweep_transition_probability(rabi, rate);
        const double rel = std::abs(std::log(p) - (-a)) / a;
        worst = std::max(worst, rel);
        per << fmt(" %.1f:%.2e", a, rel);
    }
    return {worst < 0.02, fmt("max relative error in ln P %.2e (tol 0.02);", worst) + per.str()};
}

Outcome cumulative_rabi_curve() {
    const auto t = run_preset("fig4");
    double worst = 0.0, x_max = 0.0;
    for (const auto& r : t.rows) {
        const double j0 = oracle::bessel_integral(0, r[0]), j1 = oracle::bessel_integral(1, r[0]);
        worst = std::max(worst, std::abs(r[1] - std::sqrt(j0 * j0 + j1 * j1)));
        x_max = std::max(x_max, r[0]);
    }
    return {worst < 1e-10 && x_max == 10.0,
            fmt("%zu points on [0, %g], max deviation %.2e (tol 1e-10)", t.rows.size(), x_max, worst)};
}

Outcome closed_trimode() {
    const auto p = resonant_params(0.1, 100.0);
    const auto rs = reduced_resonant_system(p);
    const TrimodeState init{0.0, 0.0, 0.5, std::sqrt(3.0) / 2.0};
    const auto ts = linspace(0.0, 10.0 * 2.0 * pi / rs.cumulative_rabi, 2001);
    numerics::IntegratorConfig cfg;
    cfg.rel_tol = 1e-10;
    cfg.abs_tol = 1e-12;
    const auto tr = integrate_trimode_full(p, init, ts, cfg);
    double worst = 0.0, t_worst = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const auto full = tr.samples[i].lab.populations();
        const auto ref = analytic_closed_solution(rs, init, ts[i]).populations();
        for (int k = 1; k < 4; ++k) {
            if (std::abs(full[k] - ref[k]) > worst) {
                worst = std::abs(full[k] - ref[k]);
                t_worst = ts[i];
            }
        }
    }
    return {worst < 0.02, fmt("max population error %.3f at t = %.1f (tol 0.02); second-order shifts of "
                              "order Omega_R^2/Omega are outside the resonant solution",
                              worst, t_worst)};
}

Outcome transparency() {
    // Full modulated coupling in the scale-separated regime Omega_R = 0.003 Omega.
    const auto p = resonant_params(0.003, 100.0);
    const auto rs = reduced_resonant_system(p);
    const cplx z = transparency_condition(rs, 1.0);
    const double n = std::sqrt(1.0 + std::norm(z));
    const TrimodeState dark{0.0, 0.0, 1.0 / n, z / n};
    const double gamma = 0.2 * rs.cumulative_rabi;
    const auto ts = linspace(0.0, 20.0 / gamma, 401);
    numerics::IntegratorConfig cfg;
    cfg.rel_tol = 1e-9;
    cfg.abs_tol = 1e-12;
    const auto s = integrate_dyadics(InteractionHamiltonian(p), {.gamma = gamma}, NoiseKind::zero_temperature,
                                     DyadicState::pure(dark), ts, cfg);
    double atom = 0.0, quanta = 0.0;
    for (const auto& m : s.states) {
        atom = std::max(atom, m(1, 1).real());
        quanta = std::max(quanta, std::abs(m(2, 2).real() + m(3, 3).real() - 1.0));
    }
    return {atom < 1e-4 && quanta < 1e-3,
            fmt("max atom population %.2e (tol 1e-4), max field-quanta drift %.2e (tol 1e-3)", atom, quanta)};
}

Outcome damped_branches() {
    const double omega = 1.0, gamma = 0.5 * omega;
    const auto base = reduced_resonant_system(resonant_params(1.0, 50.0));
    const auto rs = reduced_resonant_system(resonant_params(omega / base.cumulative_rabi, 50.0));
    const double h = 0.05;
    const auto ts = linspace(0.0, 40.0, 801);
    const auto s = integrate_dyadics(InteractionHamiltonian(rs), {.gamma = gamma}, NoiseKind::zero_temperature,
                                     DyadicState::pure({0, 1, 0, 0}), ts, tight());
    std::vector<double> y;
    for (const auto& m : s.states) y.push_back(m(1, 1).real());
    // M_001,001 carries e^{-gamma t/2} and e^{-gamma t/2 +- 2 i omega' t}.
    const auto ex = oracle::prony_exponents(y, h, 3);
    const double decay_ref = gamma / 4.0, freq_ref = std::sqrt(omega * omega - gamma * gamma / 16.0);
    double decay_err = 0.0, freq_err = 0.0;
    int oscillating = 0;
    for (const auto& x : ex) {
        decay_err = std::max(decay_err, std::abs(-x.real() / 2.0 - decay_ref) / decay_ref);
        if (std::abs(x.imag()) > 0.1) {
            ++oscillating;
            freq_err = std::max(freq_err, std::abs(std::abs(x.imag()) / 2.0 - freq_ref) / freq_ref);
        }
    }
    return {oscillating == 2 && decay_err < 0.02 && freq_err < 0.02,
            fmt("relative error: damping %.2e, frequency %.2e (tol 0.02)", decay_err, freq_err)};
}

Outcome steady_quanta() {
    const auto rs = reduced_resonant_system(resonant_params(0.1, 100.0));
    auto quanta = [&](cplx z) {
        const double n = std::sqrt(1.0 + std::norm(z));
        return steady_state_quanta({0, 0, 1.0 / n, z / n}, rs);
    };
    // Coarse polar grid: count local maxima (arg is periodic).
    const int na = 81, np = 72;
    const double amax = 4.0;
    std::vector<std::vector<double>> grid(na, std::vector<double>(np));
    for (int i = 0; i < na; ++i) {
        for (int j = 0; j < np; ++j) {
            grid[i][j] = quanta(std::polar(amax * (i + 0.5) / na, -pi + 2.0 * pi * j / np));
        }
    }
    int maxima = 0, bi = 0, bj = 0;
    for (int i = 0; i < na; ++i) {
        for (int j = 0; j < np; ++j) {
            bool top = true;
            for (int di = -1; di <= 1; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    const int ii = i + di, jj = (j + dj + np) % np;
                    if ((di || dj) && ii >= 0 && ii < na && grid[ii][jj] >= grid[i][j]) top = false;
                }
            }
            if (top) {
                ++maxima;
                bi = i;
                bj = j;
            }
        }
    }
    // Refine the maximum by shrinking local grids.
    double a = amax * (bi + 0.5) / na, phi = -pi + 2.0 * pi * bj / np;
    double da = amax / na, dphi = 2.0 * pi / np;
    for (int iter = 0; iter < 40; ++iter) {
        double best = -1.0, ba = a, bp = phi;
        for (int i = -5; i <= 5; ++i) {
            for (int j = -5; j <= 5; ++j) {
                const double aa = a + i * da / 5.0, pp = phi + j * dphi / 5.0;
                if (aa <= 0.0) continue;
                const double v = quanta(std::polar(aa, pp));
                if (v > best) {
                    best = v;
                    ba = aa;
                    bp = pp;
                }
            }
        }
        a = ba;
        phi = bp;
        da *= 0.5;
        dphi *= 0.5;
    }
    const double peak = quanta(std::polar(a, phi));
    const double a_ref = oracle::bessel_integral(0, 1.0) / oracle::bessel_integral(1, 1.0);

    // Long-time dyadics at sampled Z.
    const double gamma = 0.05;
    const std::vector<double> ts{0.0, 20.0 / gamma};
    double worst = 0.0;
    for (const cplx z : {std::polar(0.5, 0.0), std::polar(1.0, pi / 3.0), std::polar(a_ref, -pi / 2.0),
                         std::polar(2.0, 2.0), std::polar(3.0, -2.5)}) {
        const double n = std::sqrt(1.0 + std::norm(z));
        const TrimodeState init{0, 0, 1.0 / n, z / n};
        const auto s = integrate_dyadics(InteractionHamiltonian(rs), {.gamma = gamma}, NoiseKind::zero_temperature,
                                         DyadicState::pure(init), ts, tight());
        const double field = s.states.back()(2, 2).real() + s.states.back()(3, 3).real();
        worst = std::max(worst, std::abs(field - steady_state_quanta(init, rs)));
    }
    const bool pass = maxima == 1 && std::abs(peak - 1.0) < 1e-3 && std::abs(phi + pi / 2.0) < 1e-3 &&
                      std::abs(a - a_ref) < 1e-3 * a_ref && worst < 1e-3;
    return {pass, fmt("%d grid maximum, peak %.6f at |Z| = %.6f (J0/J1 = %.6f), arg Z = %.6f; "
                      "dyadic vs formula at 5 points %.2e (tol 1e-3)",
                      maxima, peak, a, a_ref, phi, worst)};
}

Outcome oracle_equivalence() {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const ProductBasis b(1, 1);
    numerics::IntegratorConfig cfg;
    cfg.rel_tol = 1e-9;
    cfg.abs_tol = 1e-11;
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const double wbar = 20.0, mod = 1.0;
        const int m = std::array{1, -1, 2}[trial % 3];
        TrimodeParams p;
        p.omega_a = ModulationSchedule::sinusoidal(wbar, 0.5 + u(rng), mod, 2.0 * pi * u(rng));
        p.omega_b = ModulationSchedule::sinusoidal(wbar - m * mod, 0.5 + u(rng), mod, 2.0 * pi * u(rng));
        p.transition = ModulationSchedule::constant(wbar);
        p.rabi_a = std::polar(0.05 + 0.1 * u(rng), 2.0 * pi * u(rng));
        p.rabi_b = std::polar(0.05 + 0.1 * u(rng), 2.0 * pi * u(rng));
        p.harmonic_order = m;
        const double sum = reduced_resonant_system(p).cumulative_rabi;
        // Small emitter detuning, well inside the rotating-wave regime.
        p.transition = ModulationSchedule::constant(wbar + 0.04 * (u(rng) - 0.5));
        const RelaxationRates r{.gamma = sum * u(rng), .gamma_el = sum * u(rng), .mu_a = sum * u(rng),
                                .mu_b = sum * u(rng)};
        Eigen::Vector4cd v;
        for (int k = 0; k < 4; ++k) v(k) = cplx(u(rng) - 0.5, u(rng) - 0.5);
        v.normalize();
        const TrimodeState init{v(0), v(1), v(2), v(3)};
        const auto ts = linspace(0.0, 5.0 * 2.0 * pi / sum, 21);
        const auto dy = integrate_dyadics(InteractionHamiltonian(p), r, NoiseKind::zero_temperature,
                                          DyadicState::pure(init), ts, cfg);
        const auto me = integrate_master(Lindbladian(p, r, b), embed_single_excitation(b, DyadicState::pure(init).m),
                                         ts, cfg);
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const Eigen::Matrix4cd block = single_excitation_block(b, to_interaction_frame(p, b, me.states[i], ts[i]));
            worst = std::max(worst, (block - dy.states[i]).cwiseAbs().maxCoeff());
        }
    }
    return {worst < 1e-6, fmt("10 scenarios, max entrywise difference %.2e (tol 1e-6)", worst)};
}

Outcome trajectory_consistency() {
    const auto base = reduced_resonant_system(resonant_params(1.0, 50.0));
    const auto rs = reduced_resonant_system(resonant_params(1.0 / base.cumulative_rabi, 50.0));
    const RelaxationRates r{.gamma = 0.4, .gamma_el = 0.1, .mu_a = 0.05, .mu_b = 0.02};
    const TrimodeState init{0, 0, 0.6, 0.8};
    const auto ts = linspace(0.0, 12.0, 25);
    const InteractionHamiltonian h(rs);
    const auto dy = integrate_dyadics(h, r, NoiseKind::zero_temperature, DyadicState::pure(init), ts, tight());
    const auto e = integrate_trajectories(h, r, NoiseKind::zero_temperature, init, ts, {.n_traj = 2000, .seed = 11});
    double pop = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        for (int k = 0; k < 4; ++k) {
            const double se = std::max(e.stderr_population[i][k], 1e-12);
            pop = std::max(pop, std::abs(e.mean_population[i][k] - dy.states[i](k, k).real()) / se);
        }
        norm = std::max(norm, std::abs(e.mean_norm[i] - 1.0) / std::max(e.stderr_norm[i], 1e-12));
    }
    return {pop <= 3.0 && norm <= 3.0,
            fmt("2000 trajectories, max deviation in standard errors: populations %.2f, norm %.2f (tol 3)", pop, norm)};
}

Outcome plasmon_modulation() {
    const auto s = cli::validate_config(cli::preset("fig7"));
    const auto t = cli::run_scenario(s).front();
    const auto& par = s.resolved["parameters"];
    const double k = par["k"].get<double>(), area = par["area"].get<double>();
    const double wpl = par["cladding"]["plasma_frequency"].get<double>();
    const Eigen::Vector3d dipole(par["dipole"][0].get<double>(), par["dipole"][1].get<double>(),
                                 par["dipole"][2].get<double>());
    const bool sym = par["parity"] == "symmetric";
    double worst = 0.0;
    for (const auto& r : t.rows) {
        const double kd = k * (1.0 + 0.1 * std::sin(r[0]));
        const double ws = wpl / std::sqrt(1.0 + std::tanh(kd)), was = wpl / std::sqrt(1.0 + 1.0 / std::tanh(kd));
        const double ch = std::cosh(kd), sh = std::sinh(kd);
        const double as = std::sqrt(4.0 * pi * ws / (area * k * (2.0 * std::sinh(2.0 * kd) + 4.0 * ch * ch)));
        const double aas = std::sqrt(4.0 * pi * was / (area * k * (2.0 * std::sinh(2.0 * kd) + 4.0 * sh * sh)));
        const Eigen::Vector3cd es(cplx(0.0, -k * ch) * as, 0.0, k * sh * as);
        const Eigen::Vector3cd eas(cplx(0.0, k * sh) * aas, 0.0, -k * ch * aas);
        const double rabi = std::abs(dipole.cast<cplx>().dot(sym ? es : eas));
        worst = std::max({worst, std::abs(r[1] - ws), std::abs(r[2] - was), std::abs(r[3] - es.norm()),
                          std::abs(r[4] - eas.norm()), std::abs(r[5] - rabi)});
    }
    double root = 0.0;
    for (double x : linspace(std::log(0.01), std::log(20.0), 401)) {
        const double kd = std::exp(x);
        CavityGeometry g;
        g.k = 1.0;
        g.half_height = ModulationSchedule::constant(kd);
        g.cladding = Cladding::drude(1.0);
        root = std::max(root, std::abs(dispersion_solve(g, 0.0, Parity::symmetric) - 1.0 / std::sqrt(1.0 + std::tanh(kd))));
        root = std::max(root, std::abs(dispersion_solve(g, 0.0, Parity::antisymmetric) -
                                       1.0 / std::sqrt(1.0 + 1.0 / std::tanh(kd))));
    }
    return {worst < 1e-10 && root < 1e-10,
            fmt("curves: max deviation %.2e over %zu times; root finder on kd in [0.01, 20]: %.2e (tol 1e-10)", worst,
                t.rows.size(), root)};
}

Outcome atom_equals_cavity() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 12; ++trial) {
        const int m = std::array{1, 2, -1, 3}[trial % 4];
        const double wbar = 40.0 + 40.0 * u(rng), mod = 0.5 + u(rng), depth = 0.2 + 2.0 * u(rng);
        TrimodeParams cav;
        cav.omega_a = ModulationSchedule::sinusoidal(wbar, depth, mod);
        cav.omega_b = ModulationSchedule::sinusoidal(wbar - m * mod, depth, mod);
        cav.transition = ModulationSchedule::constant(wbar);
        cav.rabi_a = std::polar(0.01 + 0.02 * u(rng), 2.0 * pi * u(rng));
        cav.rabi_b = std::polar(0.01 + 0.02 * u(rng), 2.0 * pi * u(rng));
        cav.harmonic_order = m;
        TrimodeParams atom = cav;
        atom.target = ModulationTarget::atom;
        atom.omega_a = ModulationSchedule::constant(wbar);
        atom.omega_b = ModulationSchedule::constant(wbar - m * mod);
        atom.transition = ModulationSchedule::sinusoidal(wbar, depth, mod, pi);
        const auto a = reduced_resonant_system(cav).matrix;
        const auto b = reduced_resonant_system(atom).matrix;
        worst = std::max(worst, (a - b).norm() / a.norm());
    }
    const double eps = std::numeric_limits<double>::epsilon();
    return {worst <= 4.0 * eps, fmt("12 matched pairs, max relative difference %.2e (tol 4 eps = %.1e)", worst, 4.0 * eps)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tvcqed acceptance suite"};
    std::vector<int> only, known;
    app.add_option("--only", only, "Run only these criteria");
    app.add_option("--known-unattainable", known, "Criteria whose FAIL does not change the exit status");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> all{
        {1, "anticrossing", 1.0, anticrossing},
        {2, "Landau-Zener sweep", 30.0, landau_zener},
        {3, "cumulative Rabi curve", 1.0, cumulative_rabi_curve},
        {4, "closed three-state dynamics, full vs resonant", 60.0, closed_trimode},
        {5, "modulation-induced transparency", 60.0, transparency},
        {6, "damped bright branches", 60.0, damped_branches},
        {7, "steady-state quanta", 300.0, steady_quanta},
        {8, "dyadics vs master equation", 300.0, oracle_equivalence},
        {9, "trajectory consistency", 300.0, trajectory_consistency},
        {10, "plasmon modulation", 1.0, plasmon_modulation},
        {11, "atom vs cavity modulation", 1.0, atom_equals_cavity},
    };
    const std::set<int> selected(only.begin(), only.end()), excused(known.begin(), known.end());
    int failures = 0, excused_failures = 0;
    for (const auto& c : all) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool pass = o.pass && secs < c.budget_s;
        std::printf("%s %2d %s: %s [%.2f s, budget %g s]%s\n", pass ? "PASS" : "FAIL", c.id, c.title.c_str(),
                    o.detail.c_str(), secs, c.budget_s, !pass && excused.count(c.id) ? " (known unattainable)" : "");
        std::fflush(stdout);
        if (!pass) (excused.count(c.id) ? excused_failures : failures)++;
    }
    std::printf("%d failed, %d known-unattainable failed\n", failures, excused_failures);
    return failures == 0 ? 0 : 1;
}
