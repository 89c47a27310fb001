#pragma once

#include <Eigen/Dense>
#include <array>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tvcqed/numerics/ode.hpp"
#include "tvcqed/schedule.hpp"

namespace tvcqed {

enum class ModulationTarget { cavity, atom };

// Basis order of the single-excitation manifold.
enum BasisIndex : int { k000 = 0, k001 = 1, k100 = 2, k010 = 3 };

struct TrimodeParams {
    ModulationSchedule omega_a;
    ModulationSchedule omega_b;
    ModulationSchedule transition;  // W(t)
    cplx rabi_a;
    cplx rabi_b;
    ModulationTarget target = ModulationTarget::cavity;
    int harmonic_order = 1;  // m in omega_b + m Omega = W

    void validate() const;
    std::vector<std::string> warnings() const;
};

struct TrimodeState {
    cplx c000;
    cplx c001;
    cplx c100;
    cplx c010;

    double norm() const;
    std::array<cplx, 4> to_array() const { return {c000, c001, c100, c010}; }
    static TrimodeState from_array(std::span<const cplx> a) { return {a[0], a[1], a[2], a[3]}; }
    std::array<double, 4> populations() const;
};

// Phases theta_alpha(t) such that C_alpha = G_alpha e^{-i theta_alpha}; zero at t = 0.
std::array<double, 4> frame_phases(const TrimodeParams& p, double t);
TrimodeState to_lab(const TrimodeParams& p, const TrimodeState& rotating, double t);
TrimodeState to_rotating(const TrimodeParams& p, const TrimodeState& lab, double t);

// Rotating-frame coupling on (001, 100, 010): <001|H|100> = -Omega_Ra e^{-i phi_a(t)} with
// phi_a = int (omega_a - W).
Eigen::Matrix3cd interaction_matrix(const TrimodeParams& p, double t);

struct TrimodeSample {
    double t;
    TrimodeState lab;
    TrimodeState rotating;
};

struct TrimodeTrajectory {
    std::vector<TrimodeSample> samples;
    numerics::IntegrationStats stats;
};

// `init` is the lab-frame state at sample_times.front().
TrimodeTrajectory integrate_trimode_full(const TrimodeParams& p, const TrimodeState& init,
                                         std::span<const double> sample_times,
                                         const numerics::IntegratorConfig& cfg = {});

struct ReducedSystem {
    cplx r_a0;
    cplx r_bm;
    double cumulative_rabi = 0.0;
    int m = 0;
    double mod_frequency = 0.0;
    Eigen::Matrix3cd matrix;  // dG/dt + matrix G = 0 on (001, 100, 010)
    double validity_ratio = 0.0;  // max |Omega_R| / Omega
    std::vector<std::string> warnings;
    TrimodeParams params;

    // Hermitian generator: dG/dt = -i hamiltonian() G.
    Eigen::Matrix3cd hamiltonian() const;
};

// Exact resonant Fourier coefficient of e^{-i int delta} for delta(t) = -m Omega - depth sin(Omega t + phase):
// (-i)^{|m|} J_{|m|}(depth/Omega) e^{i (depth/Omega) cos(phase)} e^{-i m phase}.
cplx resonant_sideband(double depth, double mod_frequency, double phase, int m);

ReducedSystem reduced_resonant_system(const TrimodeParams& p);

double cumulative_rabi(cplx r_a0, cplx r_bm);

// Rotating-frame solution of the reduced system.
TrimodeState analytic_rotating(const ReducedSystem& rs, const TrimodeState& g0, double t);
// Lab-frame solution for a lab-frame initial state given at t = 0.
TrimodeState analytic_closed_solution(const ReducedSystem& rs, const TrimodeState& init, double t);

// Weights of G(0) on the unnormalised eigenvectors (0, 1, -R_a0/R_bm), (Omega/R_a0^*, 1, R_bm^*/R_a0^*)
// and (-Omega/R_a0^*, 1, R_bm^*/R_a0^*). B rotates as e^{+i Omega t} and C as e^{-i Omega t}.
struct ClosedSolutionConstants {
    cplx a;
    cplx b;
    cplx c;
};
ClosedSolutionConstants closed_solution_constants(const ReducedSystem& rs, const TrimodeState& init);

// c010(0) making the state dark: -c100 R_a0 / R_bm.
cplx transparency_condition(const ReducedSystem& rs, cplx c100);

struct BranchTable {
    std::vector<double> detuning;
    std::vector<std::array<double, 3>> frequency;                // per branch
    std::vector<std::array<std::array<double, 3>, 3>> weight;   // [branch][|C001|, |C100|, |C010|]
};

// Dressed eigenfrequencies of the static three-level problem against delta = omega_a - W. `target`
// picks what is swept: the cavity pair (fixed omega_b - omega_a) or the transition.
BranchTable eigenstructure_vs_detuning(cplx rabi_a, cplx rabi_b, double omega_b_minus_omega_a,
                                       std::span<const double> detunings,
                                       ModulationTarget target = ModulationTarget::cavity);

// Coherent part of the single-excitation dynamics, full or resonant-only.
class InteractionHamiltonian {
public:
    explicit InteractionHamiltonian(TrimodeParams full);
    explicit InteractionHamiltonian(ReducedSystem reduced);

    Eigen::Matrix3cd at(double t) const;
    const TrimodeParams& params() const;
    bool is_reduced() const { return std::holds_alternative<ReducedSystem>(source_); }

private:
    std::variant<TrimodeParams, ReducedSystem> source_;
    Eigen::Matrix3cd constant_;
};

}  // namespace tvcqed
