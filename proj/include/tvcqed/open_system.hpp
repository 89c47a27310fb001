#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "tvcqed/numerics/ode.hpp"
#include "tvcqed/trimode.hpp"

namespace tvcqed {

// Partial reservoir rates and temperatures (energy units with hbar = k_B = 1).
struct RelaxationRates {
    double gamma = 0.0;     // atomic inelastic decay
    double gamma_el = 0.0;  // atomic pure dephasing
    double mu_a = 0.0;
    double mu_b = 0.0;
    double temperature_atom = 0.0;
    double temperature_em = 0.0;

    void validate() const;
    bool zero_temperature() const { return temperature_atom == 0.0 && temperature_em == 0.0; }
};

// Frequencies entering the Boltzmann and Bose factors.
struct ReservoirFrequencies {
    double transition = 1.0;
    double omega_a = 1.0;
    double omega_b = 1.0;
};

ReservoirFrequencies reservoir_frequencies(const TrimodeParams& p);

struct ThermalFactors {
    double n0;      // ground-state occupation of the atomic reservoir
    double n1;      // excited-state occupation
    double nbar_a;  // Bose occupation at omega_a
    double nbar_b;
};

ThermalFactors thermal_factors(const RelaxationRates& r, const ReservoirFrequencies& f);

// Decay constant gamma_{n_a n_b s} of a product state (amplitude rate; populations decay at twice it).
double compose_rates(const RelaxationRates& r, int n_a, int n_b, int level,
                     const ReservoirFrequencies& f = {});

enum class NoiseKind { zero_temperature, population_preserving, two_level_T1T2 };

// Averaged dyadics M_ab = <C_a C_b^*> in the rotating frame, basis (000, 001, 100, 010).
struct DyadicState {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();

    static DyadicState pure(const TrimodeState& g);
    double trace() const { return m.trace().real(); }
    std::array<double, 4> populations() const;
    // Throws ValidationError unless Hermitian, PSD (within tol) and of unit trace.
    void validate(double tol = 1e-10) const;
};

// Diagonal of Lambda on (000, 001, 100, 010).
std::array<double, 4> manifold_rates(const RelaxationRates& r, const ReservoirFrequencies& f);

// Feeding term D(M) of the dyadic equation.
Eigen::Matrix4cd noise_correlator(NoiseKind kind, const RelaxationRates& r, const ReservoirFrequencies& f,
                                  const Eigen::Matrix4cd& m);

struct DyadicSeries {
    std::vector<double> times;
    std::vector<Eigen::Matrix4cd> states;
    numerics::IntegrationStats stats;
};

// dM/dt = -i[H, M] - (Lambda M + M Lambda) + D(M); `init` is the rotating-frame state at the first sample.
DyadicSeries integrate_dyadics(const InteractionHamiltonian& h, const RelaxationRates& r, NoiseKind kind,
                               const DyadicState& init, std::span<const double> sample_times,
                               const numerics::IntegratorConfig& cfg = {});

Eigen::Matrix4cd dyadic_to_lab(const TrimodeParams& p, const Eigen::Matrix4cd& m, double t);

struct TrajectoryOptions {
    std::size_t n_traj = 1000;
    std::uint64_t seed = 0;
    double max_step = 0.0;  // 0: 0.01 / (fastest rate in the problem)
    unsigned threads = 0;   // 0: TVCQED_THREADS or 1
};

struct EnsembleStatistics {
    std::vector<double> times;
    std::vector<std::array<double, 4>> mean_population;
    std::vector<std::array<double, 4>> stderr_population;
    std::vector<double> mean_norm;
    std::vector<double> stderr_norm;
    std::size_t n_traj = 0;
    double dt = 0.0;
};

// Langevin unravelling at zero temperature. The excited amplitudes evolve deterministically with
// damping; c000 (and c001 when gamma_el > 0) receive complex white noise whose variance follows the
// norm-conserving correlator evaluated on the previous step's ensemble means.
EnsembleStatistics integrate_trajectories(const InteractionHamiltonian& h, const RelaxationRates& r,
                                          NoiseKind kind, const TrimodeState& init,
                                          std::span<const double> sample_times,
                                          const TrajectoryOptions& opts = {});

// Gamma_0 = 0, Gamma_{1,2} = gamma/4 +- i sqrt(Omega^2 - gamma^2/16), continued to real values when
// overdamped.
std::array<cplx, 3> damped_eigen(double cumulative_rabi, double gamma);

// Long-time field quanta left in the dark state, normalised by the initial field quanta.
double steady_state_quanta(const TrimodeState& init, const ReducedSystem& rs);

unsigned thread_count_from_env();

}  // namespace tvcqed
