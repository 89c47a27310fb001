#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "tvcqed/errors.hpp"
#include "tvcqed/open_system.hpp"

using namespace tvcqed;
using numerics::linspace;
using std::numbers::pi;

namespace {

TrimodeParams resonant_params(double rabi, double wbar = 50.0, double mod = 1.0, double depth = 1.0) {
    TrimodeParams p;
    p.omega_a = ModulationSchedule::sinusoidal(wbar, depth, mod);
    p.omega_b = ModulationSchedule::sinusoidal(wbar - mod, depth, mod);
    p.transition = ModulationSchedule::constant(wbar);
    p.rabi_a = rabi;
    p.rabi_b = rabi;
    return p;
}

TrimodeParams decoupled_params(double w = 1.0) {
    TrimodeParams p;
    p.omega_a = ModulationSchedule::constant(w);
    p.omega_b = ModulationSchedule::constant(w + 0.3);
    p.transition = ModulationSchedule::constant(w);
    p.rabi_a = 0.0;
    p.rabi_b = 0.0;
    return p;
}

// Reduced system with cumulative Rabi frequency scaled to `omega_sum`.
ReducedSystem scaled_reduced(double omega_sum) {
    const auto base = reduced_resonant_system(resonant_params(1.0));
    return reduced_resonant_system(resonant_params(omega_sum / base.cumulative_rabi));
}

}  // namespace

TEST_CASE("rate composition") {
    RelaxationRates r{.gamma = 0.4, .gamma_el = 0.0, .mu_a = 0.1, .mu_b = 0.06};
    CHECK(compose_rates(r, 0, 0, 0) == 0.0);
    CHECK(compose_rates(r, 0, 0, 1) == doctest::Approx(0.2));
    CHECK(compose_rates(r, 1, 0, 0) == doctest::Approx(0.05));
    CHECK(compose_rates(r, 0, 1, 0) == doctest::Approx(0.03));
    CHECK(compose_rates(r, 2, 1, 1) == doctest::Approx(0.2 + 0.1 + 0.03));

    r.gamma_el = 0.07;
    CHECK(compose_rates(r, 0, 0, 1) == doctest::Approx(0.27));
    CHECK(compose_rates(r, 0, 0, 0) == 0.0);

    RelaxationRates hot{.gamma = 0.4, .temperature_atom = std::numeric_limits<double>::infinity()};
    CHECK(compose_rates(hot, 0, 0, 0) == doctest::Approx(0.1));
    CHECK(compose_rates(hot, 0, 0, 1) == doctest::Approx(0.1));

    // Bose factors: rate of a mode state n is mu/2 (nbar (n+1) + (nbar+1) n).
    RelaxationRates warm{.mu_a = 0.2, .temperature_em = 2.0};
    const ReservoirFrequencies f{1.0, 1.5, 2.0};
    const double nbar = 1.0 / std::expm1(1.5 / 2.0);
    CHECK(compose_rates(warm, 0, 0, 0, f) == doctest::Approx(0.1 * nbar));
    CHECK(compose_rates(warm, 2, 0, 0, f) == doctest::Approx(0.1 * (3.0 * nbar + 2.0 * (nbar + 1.0))));

    CHECK_THROWS_AS(compose_rates(r, -1, 0, 0), ValidationError);
    CHECK_THROWS_AS(RelaxationRates{.gamma = -1.0}.validate(), ValidationError);
}

TEST_CASE("Weisskopf-Wigner decay of the bare emitter") {
    const double gamma = 0.3;
    const InteractionHamiltonian h(decoupled_params());
    const RelaxationRates r{.gamma = gamma};
    const auto ts = linspace(0.0, 15.0, 31);
    const auto s = integrate_dyadics(h, r, NoiseKind::zero_temperature, DyadicState::pure({0, 1, 0, 0}), ts);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double e = std::exp(-gamma * ts[i]);
        CHECK(std::abs(s.states[i](1, 1).real() - e) < 1e-9);
        CHECK(std::abs(s.states[i](0, 0).real() - (1.0 - e)) < 1e-9);
    }
}

TEST_CASE("closed limit reproduces the pure-state solution") {
    const auto rs = reduced_resonant_system(resonant_params(0.1));
    const TrimodeState g0{0.0, cplx(0.3, 0.1), 0.5, cplx(0.0, 0.8)};
    const double n = std::sqrt(g0.norm());
    const TrimodeState init{g0.c000, g0.c001 / n, g0.c100 / n, g0.c010 / n};
    const auto ts = linspace(0.0, 80.0, 41);
    const auto s = integrate_dyadics(InteractionHamiltonian(rs), RelaxationRates{}, NoiseKind::zero_temperature,
                                     DyadicState::pure(init), ts);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const auto g = analytic_rotating(rs, init, ts[i]);
        const Eigen::Vector4cd v(g.c000, g.c001, g.c100, g.c010);
        CHECK((s.states[i] - v * v.adjoint()).norm() < 1e-8);
    }
}

TEST_CASE("trace and Hermiticity are conserved for each noise model") {
    const InteractionHamiltonian h(resonant_params(0.2, 20.0));
    const TrimodeState init{0.0, 0.6, 0.0, 0.8};
    const auto ts = linspace(0.0, 30.0, 16);
    const InteractionHamiltonian bare(decoupled_params());
    struct Case {
        const InteractionHamiltonian* h;
        NoiseKind kind;
        RelaxationRates r;
        TrimodeState init;
    };
    // The emitter-only model is closed on {000, 001}; with T_a > 0 the field states would be pumped
    // out of the manifold.
    const Case cases[] = {
        {&h, NoiseKind::zero_temperature, {.gamma = 0.1, .gamma_el = 0.02, .mu_a = 0.03, .mu_b = 0.05}, init},
        {&h, NoiseKind::population_preserving, {.gamma = 0.1, .mu_a = 0.03, .mu_b = 0.05, .temperature_em = 5.0},
         init},
        {&h, NoiseKind::two_level_T1T2, {.gamma = 0.1, .gamma_el = 0.04}, init},
        {&bare, NoiseKind::two_level_T1T2, {.gamma = 0.1, .gamma_el = 0.04, .temperature_atom = 8.0},
         {0.6, 0.8, 0, 0}},
    };
    for (const auto& c : cases) {
        const auto s = integrate_dyadics(*c.h, c.r, c.kind, DyadicState::pure(c.init), ts);
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const auto& m = s.states[i];
            CHECK(std::abs(m.trace().real() - 1.0) < 1e-9 * std::max(1.0, ts[i]));
            CHECK((m - m.adjoint()).norm() < 1e-10);
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m);
            CHECK(es.eigenvalues().minCoeff() > -1e-10);
        }
    }
}

TEST_CASE("noise model preconditions") {
    const InteractionHamiltonian h(decoupled_params());
    const auto ts = linspace(0.0, 1.0, 3);
    const auto init = DyadicState::pure({0, 1, 0, 0});
    CHECK_THROWS_AS(integrate_dyadics(h, {.gamma = 0.1, .temperature_atom = 1.0}, NoiseKind::zero_temperature,
                                      init, ts),
                    ValidationError);
    CHECK_THROWS_AS(integrate_dyadics(h, {.gamma = 0.1, .mu_a = 0.1}, NoiseKind::two_level_T1T2, init, ts),
                    ValidationError);
    DyadicState bad;
    bad.m(1, 1) = 1.2;
    bad.m(0, 0) = -0.2;
    CHECK_THROWS_AS(integrate_dyadics(h, {}, NoiseKind::zero_temperature, bad, ts), ValidationError);
}

TEST_CASE("two-level closure gives T1/T2 Bloch relaxation") {
    const double gamma = 0.2, gamma_el = 0.05, temp = 0.6;
    const TrimodeParams p = decoupled_params(1.0);
    const RelaxationRates r{.gamma = gamma, .gamma_el = gamma_el, .temperature_atom = temp};
    const auto th = thermal_factors(r, reservoir_frequencies(p));
    const TrimodeState init{std::sqrt(0.3), std::sqrt(0.7), 0, 0};
    const auto ts = linspace(0.0, 25.0, 26);
    const auto s = integrate_dyadics(InteractionHamiltonian(p), r, NoiseKind::two_level_T1T2,
                                     DyadicState::pure(init), ts);
    const double inv_t2 = gamma / 2.0 + gamma_el;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double t = ts[i];
        const double pop = th.n1 + (0.7 - th.n1) * std::exp(-gamma * t);
        CHECK(std::abs(s.states[i](1, 1).real() - pop) < 1e-9);
        CHECK(std::abs(std::abs(s.states[i](0, 1)) - std::sqrt(0.21) * std::exp(-inv_t2 * t)) < 1e-9);
    }
}

TEST_CASE("damped eigenvalues") {
    auto e = damped_eigen(1.3, 0.0);
    CHECK(std::abs(e[0]) == 0.0);
    CHECK(std::abs(e[1] - cplx(0.0, 1.3)) < 1e-15);
    CHECK(std::abs(e[2] - cplx(0.0, -1.3)) < 1e-15);

    e = damped_eigen(0.25, 1.0);
    CHECK(std::abs(e[1] - cplx(0.25, 0.0)) < 1e-15);
    CHECK(std::abs(e[2] - cplx(0.25, 0.0)) < 1e-15);

    e = damped_eigen(2.0, 2.0);
    CHECK(e[1].real() == doctest::Approx(0.5));
    CHECK(e[1].imag() == doctest::Approx(0.96825 * 2.0).epsilon(1e-5));

    // Cross-check against the non-Hermitian generator of the damped reduced system:
    // dG/dt = -(i H + Lambda) G has eigenvalues -Gamma.
    for (double gamma : {0.3, 2.0, 7.0}) {
        const auto rs = scaled_reduced(2.0);
        Eigen::Matrix3cd gen = cplx(0.0, 1.0) * rs.hamiltonian();
        gen(0, 0) += 0.5 * gamma;
        Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(gen);
        const auto ref = damped_eigen(rs.cumulative_rabi, gamma);
        for (const auto& g : ref) {
            double best = 1e300;
            for (int k = 0; k < 3; ++k) best = std::min(best, std::abs(es.eigenvalues()(k) - g));
            CHECK(best < 1e-12);
        }
    }
    CHECK_THROWS_AS(damped_eigen(-1.0, 0.0), ValidationError);
}

TEST_CASE("bright branches decay at half the emitter rate") {
    const double omega = 1.0, gamma = 0.5;
    const auto rs = scaled_reduced(omega);
    // Orthogonal to the dark state: the excited atom.
    const double h = 0.05;
    const auto ts = linspace(0.0, 40.0, 801);
    const auto s = integrate_dyadics(InteractionHamiltonian(rs), {.gamma = gamma}, NoiseKind::zero_temperature,
                                     DyadicState::pure({0, 1, 0, 0}), ts);
    std::vector<double> y;
    for (const auto& m : s.states) y.push_back(m(1, 1).real());
    const auto ex = oracle::prony_exponents(y, h, 3);
    // Exponents: -gamma/2 and -gamma/2 +- 2 i omega'.
    const double wexp = std::sqrt(omega * omega - gamma * gamma / 16.0);
    for (const auto& x : ex) {
        CHECK(std::abs(-x.real() - gamma / 2.0) < 0.02 * gamma / 2.0);
        if (std::abs(x.imag()) > 0.1) CHECK(std::abs(std::abs(x.imag()) / 2.0 - wexp) < 0.02 * wexp);
    }
}

TEST_CASE("long-time state is the dark superposition") {
    const double gamma = 0.5;
    const auto rs = scaled_reduced(1.0);
    const TrimodeState init{0.0, 0.0, std::sqrt(0.5), std::sqrt(0.5)};
    const double t_end = 80.0 / gamma;
    const std::vector<double> ts{0.0, t_end};
    const auto s = integrate_dyadics(InteractionHamiltonian(rs), {.gamma = gamma}, NoiseKind::zero_temperature,
                                     DyadicState::pure(init), ts);
    const auto& m = s.states.back();
    CHECK(std::abs(m(1, 2)) < 1e-8);
    CHECK(std::abs(m(1, 3)) < 1e-8);
    CHECK(std::abs(m(1, 1)) < 1e-8);
    // Field part is proportional to (R_bm, -R_a0).
    const Eigen::Vector2cd dark(rs.r_bm / rs.cumulative_rabi, -rs.r_a0 / rs.cumulative_rabi);
    const Eigen::Matrix2cd field = m.block<2, 2>(2, 2);
    const double n = field.trace().real();
    CHECK((field - n * dark * dark.adjoint()).norm() < 1e-8);
}

TEST_CASE("steady-state quanta") {
    const auto rs = reduced_resonant_system(resonant_params(0.1));
    const cplx c100 = 1.0;
    const cplx c010 = transparency_condition(rs, c100);
    const double n = std::sqrt(std::norm(c100) + std::norm(c010));
    CHECK(steady_state_quanta({0, 0, c100 / n, c010 / n}, rs) == doctest::Approx(1.0).epsilon(1e-12));
    // Atom initially excited: nothing projects on the dark state, but the normalisation is undefined.
    CHECK(std::abs(closed_solution_constants(rs, {0, 1, 0, 0}).a) < 1e-15);
    CHECK_THROWS_AS(steady_state_quanta({0, 1, 0, 0}, rs), ValidationError);
    CHECK(std::arg(c010 / c100) == doctest::Approx(-pi / 2));
    CHECK_THROWS_AS(steady_state_quanta({0, 0, 1, 1}, rs), ValidationError);

    // Generic Z = 1 against long-time dyadics.
    const double gamma = 0.05;
    const TrimodeState init{0, 0, std::sqrt(0.5), std::sqrt(0.5)};
    const std::vector<double> ts{0.0, 20.0 / gamma};
    const auto s = integrate_dyadics(InteractionHamiltonian(rs), {.gamma = gamma}, NoiseKind::zero_temperature,
                                     DyadicState::pure(init), ts);
    const double quanta = s.states.back()(2, 2).real() + s.states.back()(3, 3).real();
    CHECK(std::abs(quanta - steady_state_quanta(init, rs)) < 1e-3);
}

TEST_CASE("trajectories without damping follow the closed solution") {
    const auto rs = reduced_resonant_system(resonant_params(0.1));
    const TrimodeState init{0, 0, 0.6, 0.8};
    const auto ts = linspace(0.0, 60.0, 13);
    const auto e = integrate_trajectories(InteractionHamiltonian(rs), {}, NoiseKind::zero_temperature, init, ts,
                                          {.n_traj = 4, .seed = 3});
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const auto ref = analytic_rotating(rs, init, ts[i]).populations();
        for (int k = 0; k < 4; ++k) {
            CHECK(std::abs(e.mean_population[i][k] - ref[k]) < 1e-9);
            CHECK(e.stderr_population[i][k] < 1e-12);
        }
    }
}

TEST_CASE("trajectory ensemble matches the dyadic populations") {
    const auto rs = scaled_reduced(1.0);
    const RelaxationRates r{.gamma = 0.4, .gamma_el = 0.1};
    const TrimodeState init{0, 0, 0.6, 0.8};
    const auto ts = linspace(0.0, 12.0, 13);
    const InteractionHamiltonian h(rs);
    const auto dy = integrate_dyadics(h, r, NoiseKind::zero_temperature, DyadicState::pure(init), ts);
    const auto e = integrate_trajectories(h, r, NoiseKind::zero_temperature, init, ts, {.n_traj = 2000, .seed = 11});
    for (std::size_t i = 0; i < ts.size(); ++i) {
        for (int k = 0; k < 4; ++k) {
            const double diff = std::abs(e.mean_population[i][k] - dy.states[i](k, k).real());
            CHECK(diff <= 3.0 * e.stderr_population[i][k] + 1e-6);
        }
        CHECK(std::abs(e.mean_norm[i] - 1.0) <= 3.0 * e.stderr_norm[i] + 1e-12);
    }
}

TEST_CASE("trajectory results depend only on the seed") {
    const auto rs = scaled_reduced(1.0);
    const RelaxationRates r{.gamma = 0.4, .gamma_el = 0.1};
    const TrimodeState init{0, 0, 0.6, 0.8};
    const auto ts = linspace(0.0, 3.0, 4);
    const InteractionHamiltonian h(rs);
    const auto a = integrate_trajectories(h, r, NoiseKind::zero_temperature, init, ts,
                                          {.n_traj = 101, .seed = 5, .threads = 1});
    const auto b = integrate_trajectories(h, r, NoiseKind::zero_temperature, init, ts,
                                          {.n_traj = 101, .seed = 5, .threads = 3});
    const auto c = integrate_trajectories(h, r, NoiseKind::zero_temperature, init, ts,
                                          {.n_traj = 101, .seed = 6, .threads = 1});
    CHECK(a.mean_population == b.mean_population);
    CHECK(a.stderr_population == b.stderr_population);
    CHECK(a.mean_norm == b.mean_norm);
    CHECK(a.mean_population != c.mean_population);

    CHECK_THROWS_AS(integrate_trajectories(h, {.gamma = 0.1, .temperature_em = 1.0}, NoiseKind::zero_temperature,
                                           init, ts),
                    ValidationError);
    CHECK_THROWS_AS(integrate_trajectories(h, r, NoiseKind::zero_temperature, init, ts, {.n_traj = 0}),
                    ValidationError);
}

TEST_CASE("loss of positivity aborts the dyadic integration") {
    TrimodeParams p = decoupled_params();
    p.rabi_a = 1.0;
    p.rabi_b = 1.0;
    numerics::IntegratorConfig loose;
    loose.rel_tol = 1e-3;
    loose.abs_tol = 1e-3;
    const auto ts = linspace(0.0, 50.0, 501);
    try {
        integrate_dyadics(InteractionHamiltonian(p), {.gamma = 500.0}, NoiseKind::zero_temperature,
                          DyadicState::pure({0, 1, 0, 0}), ts, loose);
        FAIL("expected a positivity abort");
    } catch (const NumericalError& e) {
        CHECK(e.has_time());
        CHECK(std::string(e.what()).find("positivity") != std::string::npos);
    }
}
