#include "tvcqed/jaynes_cummings.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tvcqed/errors.hpp"

namespace tvcqed {
namespace {

double representative(const ModulationSchedule& s) {
    if (auto m = s.mean()) return *m;
    return s(std::max(0.0, s.domain().first));
}

}  // namespace

cplx JCParams::rabi_at(double t) const { return std::polar(rabi(t), rabi_phase); }

std::vector<std::string> JCParams::warnings() const {
    std::vector<std::string> out;
    const double r = std::abs(representative(rabi));
    const double w = std::abs(representative(mode_frequency));
    if (r > 0.1 * w) {
        std::ostringstream msg;
        msg << "RWA validity: |Omega_R| = " << r << " exceeds 0.1 * omega = " << 0.1 * w;
        out.push_back(msg.str());
    }
    return out;
}

JCTrajectory integrate_jc_block(const JCParams& p, const JCBlockState& init,
                                std::span<const double> sample_times,
                                const numerics::IntegratorConfig& cfg) {
    if (init.n < 1) throw ValidationError("JC block index n must be >= 1");
    if (std::abs(init.norm() - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "JC initial state not normalized: norm = " << init.norm();
        throw ValidationError(msg.str());
    }
    const double sqrt_n = std::sqrt(static_cast<double>(init.n));
    auto rhs = [&](double t, std::span<const cplx> y, std::span<cplx> dy) {
        const double phase = p.mode_frequency.phase_integral(0.0, t) -
                             p.transition_frequency.phase_integral(0.0, t);
        const cplx rabi = sqrt_n * p.rabi_at(t);
        const cplx e = std::polar(1.0, phase);
        dy[0] = cplx(0.0, 1.0) * std::conj(rabi) * e * y[1];
        dy[1] = cplx(0.0, 1.0) * rabi * std::conj(e) * y[0];
    };
    const std::array<cplx, 2> y0{init.g_n0, init.g_n11};
    JCTrajectory out;
    out.samples.reserve(sample_times.size());
    out.stats = numerics::integrate_complex_ode(
        rhs, y0, sample_times, cfg, [&](std::size_t, double t, std::span<const cplx> y) {
            out.samples.push_back({t, JCBlockState{init.n, y[0], y[1]}});
        });
    return out;
}

JCLabAmplitudes jc_lab_amplitudes(const JCParams& p, const JCBlockState& g, double t) {
    const double phi_w = p.mode_frequency.phase_integral(0.0, t);
    const double phi_a = p.transition_frequency.phase_integral(0.0, t);
    const double n = g.n;
    return {g.g_n0 * std::polar(1.0, -(n + 0.5) * phi_w),
            g.g_n11 * std::polar(1.0, -((n - 0.5) * phi_w + phi_a))};
}

JCEigenmodes jc_eigenmodes(double detuning, cplx rabi) {
    JCEigenmodes out{};
    const double r2 = std::norm(rabi);
    const double root = std::sqrt(0.25 * detuning * detuning + r2);
    out.nu1 = 0.5 * detuning + root;
    out.nu2 = 0.5 * detuning - root;
    if (r2 == 0.0) {
        // Decoupled: nu = delta belongs to |n>|0>, nu = 0 to |n-1>|1>.
        out.degenerate = true;
        out.k1 = out.k2 = cplx(std::nan(""), std::nan(""));
        const bool upper_is_field = detuning >= 0.0;
        out.v1 = upper_is_field ? std::array<cplx, 2>{1.0, 0.0} : std::array<cplx, 2>{0.0, 1.0};
        out.v2 = upper_is_field ? std::array<cplx, 2>{0.0, 1.0} : std::array<cplx, 2>{1.0, 0.0};
        return out;
    }
    // The second block equation gives -nu G_(n-1)1 = Omega G_n0 in the co-rotating frame.
    // Computing nu2 as -|Omega|^2/nu1 avoids cancellation when |delta| >> |Omega|.
    if (detuning >= 0.0) {
        out.nu2 = -r2 / out.nu1;
    } else {
        out.nu1 = -r2 / out.nu2;
    }
    out.k1 = -out.nu1 / rabi;
    out.k2 = -out.nu2 / rabi;
    auto unit = [](cplx k) {
        const double s = std::sqrt(std::norm(k) + 1.0);
        return std::array<cplx, 2>{k / s, 1.0 / s};
    };
    out.v1 = unit(out.k1);
    out.v2 = unit(out.k2);
    return out;
}

SweepResult sweep_transition(double rabi, double rate, std::optional<double> window,
                             const numerics::IntegratorConfig& cfg) {
    if (!(rate > 0.0)) throw ValidationError("sweep rate beta must be > 0");
    if (!(rabi > 0.0)) throw ValidationError("sweep Rabi frequency must be > 0");
    const double scale = std::max(rabi, std::sqrt(rate));
    const double w = window.value_or(30.0 * scale);
    if (w < 20.0 * scale) {
        std::ostringstream msg;
        msg << "asymptotic regime not reached: window " << w << " < 20 * max(Omega_R, sqrt(beta)) = "
            << 20.0 * scale;
        throw ValidationError(msg.str());
    }
    JCParams p;
    p.mode_frequency = ModulationSchedule::linear_sweep(rate, 0.0);
    p.transition_frequency = ModulationSchedule::constant(0.0);
    p.rabi = ModulationSchedule::constant(rabi);

    const double t0 = -w / rate;
    const double t1 = w / rate;
    // Co-rotating amplitudes a = G_n0 e^{-i int_0^t delta}, b = G_(n-1)1 diagonalise the block at
    // each instant.
    const auto start = jc_eigenmodes(-w, rabi);
    const double phase0 = p.mode_frequency.phase_integral(0.0, t0);
    JCBlockState init{1, start.v1[0] * std::polar(1.0, phase0), start.v1[1]};
    const double nrm = std::sqrt(init.norm());
    init.g_n0 /= nrm;
    init.g_n11 /= nrm;

    const std::array<double, 2> times{t0, t1};
    const auto traj = integrate_jc_block(p, init, times, cfg);
    const auto& fin = traj.samples.back().state;
    const cplx a = fin.g_n0 * std::polar(1.0, -p.mode_frequency.phase_integral(0.0, t1));
    const cplx b = fin.g_n11;
    const auto end = jc_eigenmodes(w, rabi);
    const cplx overlap = std::conj(end.v2[0]) * a + std::conj(end.v2[1]) * b;

    SweepResult out;
    out.probability = std::norm(overlap);
    out.product_population = std::norm(b);
    out.window = w;
    out.adiabaticity = 2.0 * 3.14159265358979323846 * rabi * rabi / rate;
    return out;
}

double sweep_transition_probability(double rabi, double rate, std::optional<double> window,
                                    const numerics::IntegratorConfig& cfg) {
    return sweep_transition(rabi, rate, window, cfg).probability;
}

std::vector<cplx> adiabatic_mode_phase(const ModulationSchedule& s, std::span<const cplx> fock_weights,
                                       double t) {
    double total = 0.0;
    for (const cplx& c : fock_weights) total += std::norm(c);
    if (std::abs(total - 1.0) > 1e-12) {
        throw ValidationError("adiabatic_mode_phase: Fock weights must be normalized");
    }
    const double phi = s.phase_integral(0.0, t);
    std::vector<cplx> out(fock_weights.size());
    for (std::size_t n = 0; n < fock_weights.size(); ++n) {
        out[n] = fock_weights[n] * std::polar(1.0, -(static_cast<double>(n) + 0.5) * phi);
    }
    return out;
}

}  // namespace tvcqed
