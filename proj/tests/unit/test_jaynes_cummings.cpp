#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "tvcqed/errors.hpp"
#include "tvcqed/jaynes_cummings.hpp"

using namespace tvcqed;
using numerics::linspace;
using std::numbers::pi;

namespace {

JCParams constant_params(double omega, double transition, double rabi, double phase = 0.0) {
    JCParams p;
    p.mode_frequency = ModulationSchedule::constant(omega);
    p.transition_frequency = ModulationSchedule::constant(transition);
    p.rabi = ModulationSchedule::constant(rabi);
    p.rabi_phase = phase;
    return p;
}

}  // namespace

TEST_CASE("resonant Rabi flopping and norm conservation") {
    const double rabi = 0.8;
    const auto p = constant_params(20.0, 20.0, rabi, 0.4);
    const auto ts = linspace(0.0, 10.0 * pi / rabi, 301);
    const auto tr = integrate_jc_block(p, JCBlockState{1, 1.0, 0.0}, ts);
    for (const auto& s : tr.samples) {
        const double sn = std::sin(rabi * s.t);
        CHECK(std::abs(std::norm(s.state.g_n11) - sn * sn) < 1e-7);
        CHECK(std::abs(s.state.norm() - 1.0) < 10.0 * 1e-9);
    }
}

TEST_CASE("photon-number scaling of the block") {
    const double rabi = 0.5;
    const auto p = constant_params(5.0, 5.0, rabi);
    const auto ts = linspace(0.0, 4.0, 50);
    const auto tr = integrate_jc_block(p, JCBlockState{4, 1.0, 0.0}, ts);
    for (const auto& s : tr.samples) {
        const double sn = std::sin(2.0 * rabi * s.t);
        CHECK(std::abs(std::norm(s.state.g_n11) - sn * sn) < 1e-7);
    }
}

TEST_CASE("detuned block reaches the generalized Rabi maximum") {
    const double rabi = 1.0, delta = 2.0;
    const auto p = constant_params(10.0 + delta, 10.0, rabi);
    const auto ts = linspace(0.0, 20.0, 4001);
    const auto tr = integrate_jc_block(p, JCBlockState{1, 1.0, 0.0}, ts);
    double peak = 0.0;
    for (const auto& s : tr.samples) peak = std::max(peak, std::norm(s.state.g_n11));
    const double expected = rabi * rabi / (rabi * rabi + delta * delta / 4.0);
    CHECK(expected == doctest::Approx(0.5));
    CHECK(std::abs(peak - expected) < 1e-5);
}

TEST_CASE("integrate_jc_block input validation") {
    const auto p = constant_params(1.0, 1.0, 0.1);
    const std::vector<double> ts{0.0, 1.0};
    CHECK_THROWS_AS(integrate_jc_block(p, JCBlockState{1, 1.0, 0.1}, ts), ValidationError);
    CHECK_THROWS_AS(integrate_jc_block(p, JCBlockState{0, 1.0, 0.0}, ts), ValidationError);
}

TEST_CASE("eigenmodes against a Hermitian eigensolver") {
    for (double delta : {-7.0, -1.0, 0.0, 0.5, 3.0, 40.0}) {
        for (cplx rabi : {cplx(1.0, 0.0), cplx(0.3, -0.8), cplx(0.0, 2.0)}) {
            const auto m = jc_eigenmodes(delta, rabi);
            Eigen::Matrix2cd h;
            h << delta, -std::conj(rabi), -rabi, 0.0;
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h);
            CHECK(m.nu1 == doctest::Approx(es.eigenvalues()(1)).epsilon(1e-12));
            CHECK(m.nu2 == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-12));
            CHECK(std::abs(m.k1 * std::conj(m.k2) + 1.0) < 1e-12);
            for (const auto& [nu, v] : {std::pair{m.nu1, m.v1}, std::pair{m.nu2, m.v2}}) {
                const Eigen::Vector2cd x(v[0], v[1]);
                CHECK((h * x - nu * x).norm() < 1e-12 * std::max(1.0, std::abs(nu)));
                CHECK(x.norm() == doctest::Approx(1.0));
            }
        }
    }
    const auto sym = jc_eigenmodes(0.0, cplx(0.0, 1.5));
    CHECK(sym.nu1 == doctest::Approx(1.5));
    CHECK(sym.nu2 == doctest::Approx(-1.5));
    CHECK(sym.nu1 - sym.nu2 == doctest::Approx(3.0));
    const auto off = jc_eigenmodes(3.0, 1.0);
    CHECK(off.nu1 == doctest::Approx(3.30278).epsilon(1e-5));
    CHECK(off.nu2 == doctest::Approx(-0.30278).epsilon(1e-5));
}

TEST_CASE("eigenmodes without coupling are flagged degenerate") {
    const auto m = jc_eigenmodes(2.0, 0.0);
    CHECK(m.degenerate);
    CHECK(m.nu1 == 2.0);
    CHECK(m.nu2 == 0.0);
    CHECK(m.v1[0] == cplx(1.0));
    CHECK(m.v2[1] == cplx(1.0));
    const auto neg = jc_eigenmodes(-2.0, 0.0);
    CHECK(neg.nu1 == 0.0);
    CHECK(neg.v1[1] == cplx(1.0));
}

TEST_CASE("linear sweep transition probability") {
    const double rabi = 1.0;
    const double p = sweep_transition_probability(rabi, 2.0 * pi * rabi * rabi);
    CHECK(p == doctest::Approx(std::exp(-1.0)).epsilon(5e-3));
    CHECK(sweep_transition_probability(rabi, 400.0 * rabi * rabi) > 0.98);
    CHECK(sweep_transition_probability(rabi, 0.5 * rabi * rabi) < 1e-5);
    CHECK_THROWS_WITH_AS(sweep_transition_probability(rabi, 1.0, 5.0), doctest::Contains("asymptotic regime not reached"),
                         ValidationError);
    CHECK_THROWS_AS(sweep_transition_probability(rabi, -1.0), ValidationError);
}

TEST_CASE("slow sweep follows the adiabatic branch") {
    const double rabi = 1.0;
    const auto r = sweep_transition(rabi, 0.01 * rabi * rabi);
    // Starting next to |n-1>|1>, adiabatic following ends next to |n>|0>.
    CHECK(1.0 - r.product_population >= 0.99);
}

TEST_CASE("adiabatic mode phase") {
    const auto w = ModulationSchedule::constant(3.0);
    const std::vector<cplx> fock{0.0, 1.0};
    const auto out = adiabatic_mode_phase(w, fock, 2.0);
    CHECK(std::abs(out[1] - std::polar(1.0, -1.5 * 3.0 * 2.0)) < 1e-14);

    const auto s = ModulationSchedule::sinusoidal(5.0, 0.5, 0.2);
    const std::vector<cplx> mix{cplx(0.6, 0.0), cplx(0.0, 0.48), cplx(0.64, 0.0)};
    double invariant0 = 0.0;
    for (std::size_t n = 0; n < mix.size(); ++n) invariant0 += (n + 0.5) * std::norm(mix[n]);
    for (double t : {0.0, 1.0, 17.0}) {
        const auto c = adiabatic_mode_phase(s, mix, t);
        double invariant = 0.0;
        for (std::size_t n = 0; n < c.size(); ++n) {
            CHECK(std::abs(c[n]) == doctest::Approx(std::abs(mix[n])));
            invariant += (n + 0.5) * std::norm(c[n]);
        }
        CHECK(invariant == doctest::Approx(invariant0).epsilon(1e-14));
    }
    const std::vector<cplx> bad{1.0, 1.0};
    CHECK_THROWS_AS(adiabatic_mode_phase(s, bad, 1.0), ValidationError);
}

TEST_CASE("lab-frame reconstruction of a decoupled block") {
    const auto p = constant_params(2.0, 1.5, 0.0);
    const JCBlockState g{2, cplx(0.6, 0.0), cplx(0.0, 0.8)};
    const auto c = jc_lab_amplitudes(p, g, 3.0);
    CHECK(std::abs(c.c_n0 - 0.6 * std::polar(1.0, -2.5 * 2.0 * 3.0)) < 1e-14);
    CHECK(std::abs(c.c_n11 - cplx(0.0, 0.8) * std::polar(1.0, -(1.5 * 2.0 + 1.5) * 3.0)) < 1e-14);
}

TEST_CASE("frozen coupling approximates the modulated one") {
    // Slow modulation: omega(t) = 100 - sin(t); Omega_R tracks sqrt(omega) to first order.
    const double wbar = 100.0, dw = 1.0, mod = 1.0, rabi = 0.5;
    JCParams full;
    full.mode_frequency = ModulationSchedule::sinusoidal(wbar, dw, mod);
    full.transition_frequency = ModulationSchedule::constant(wbar);
    full.rabi = ModulationSchedule::sinusoidal(rabi, rabi * dw / (2.0 * wbar), mod);
    JCParams frozen = full;
    frozen.rabi = ModulationSchedule::constant(rabi);
    const auto ts = linspace(0.0, 10.0 * 2.0 * pi / rabi, 400);
    const auto a = integrate_jc_block(full, JCBlockState{}, ts);
    const auto b = integrate_jc_block(frozen, JCBlockState{}, ts);
    double worst = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        worst = std::max(worst, std::abs(std::norm(a.samples[i].state.g_n11) -
                                         std::norm(b.samples[i].state.g_n11)));
    }
    CHECK(worst < 5.0 * dw / wbar);
}

TEST_CASE("RWA warning") {
    CHECK(constant_params(10.0, 10.0, 0.5).warnings().empty());
    CHECK(constant_params(10.0, 10.0, 2.0).warnings().size() == 1);
}
