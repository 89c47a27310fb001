#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tvcqed/numerics/ode.hpp"
#include "tvcqed/schedule.hpp"

namespace tvcqed {

// Single mode plus two-level emitter in the rotating-wave approximation.
struct JCParams {
    ModulationSchedule mode_frequency;        // omega(t)
    ModulationSchedule transition_frequency;  // W(t)
    ModulationSchedule rabi;                  // |Omega_R(t)| of the n = 1 block
    double rabi_phase = 0.0;

    cplx rabi_at(double t) const;
    double detuning(double t) const { return mode_frequency(t) - transition_frequency(t); }
    // Non-fatal diagnostics (RWA validity).
    std::vector<std::string> warnings() const;
};

// Rotating-frame amplitudes of |n>|0> and |n-1>|1>.
struct JCBlockState {
    int n = 1;
    cplx g_n0{1.0, 0.0};
    cplx g_n11{0.0, 0.0};

    double norm() const { return std::norm(g_n0) + std::norm(g_n11); }
};

struct JCSample {
    double t;
    JCBlockState state;
};

struct JCTrajectory {
    std::vector<JCSample> samples;
    numerics::IntegrationStats stats;
};

// Integrates dG_n0/dt = i sqrt(n) Omega_R^* e^{i int delta} G_(n-1)1 and its partner, with the
// phase integral taken from t = 0.
JCTrajectory integrate_jc_block(const JCParams& p, const JCBlockState& init,
                                std::span<const double> sample_times,
                                const numerics::IntegratorConfig& cfg = {});

struct JCLabAmplitudes {
    cplx c_n0;
    cplx c_n11;
};

// C_n0 = G_n0 e^{-i(n+1/2) int omega}, C_(n-1)1 = G_(n-1)1 e^{-i[(n-1/2) int omega + int W]}.
JCLabAmplitudes jc_lab_amplitudes(const JCParams& p, const JCBlockState& g, double t);

// Instantaneous eigenmodes of the block: nu = delta/2 +- sqrt(delta^2/4 + |Omega|^2). Vectors are
// (g_n0, g_n11) at the instant where the e^{i delta t} gauge factor equals 1.
struct JCEigenmodes {
    double nu1;
    double nu2;
    cplx k1;  // g_n0 / g_n11 on branch 1 (undefined when degenerate)
    cplx k2;
    std::array<cplx, 2> v1;
    std::array<cplx, 2> v2;
    bool degenerate = false;
};

JCEigenmodes jc_eigenmodes(double detuning, cplx rabi);

struct SweepResult {
    double probability;         // population left on the branch connected to the initial state
    double product_population;  // raw |G_(n-1)1|^2 at the end of the window
    double window;
    double adiabaticity;        // 2 pi |Omega|^2 / beta
};

// Linear sweep delta(t) = beta t across [-window, window], starting on the upper branch.
SweepResult sweep_transition(double rabi, double rate, std::optional<double> window = std::nullopt,
                             const numerics::IntegratorConfig& cfg = {});

double sweep_transition_probability(double rabi, double rate,
                                    std::optional<double> window = std::nullopt,
                                    const numerics::IntegratorConfig& cfg = {});

inline double landau_zener_probability(double rabi, double rate) {
    return std::exp(-2.0 * 3.14159265358979323846 * rabi * rabi / rate);
}

// Fock amplitudes of a single slowly modulated mode: C_n(t) = C_n(0) e^{-i(n+1/2) int_0^t omega}.
std::vector<cplx> adiabatic_mode_phase(const ModulationSchedule& s, std::span<const cplx> fock_weights,
                                       double t);

}  // namespace tvcqed
