#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tvcqed/schedule.hpp"

namespace tvcqed {

enum class Parity { symmetric, antisymmetric };

const char* to_string(Parity p);

// Permittivity of the metal outside the gap.
class Cladding {
public:
    // 1 - omega_pl^2 / omega^2
    static Cladding drude(double plasma_frequency);
    // Linear interpolation of a table sorted by frequency; evaluation outside the table throws.
    static Cladding tabulated(std::vector<double> omega, std::vector<double> epsilon);

    double epsilon(double omega) const;
    // d(omega eps)/d omega
    double d_omega_epsilon(double omega) const;

    bool is_drude() const { return table_omega_.empty(); }
    double plasma_frequency() const { return plasma_; }
    std::pair<double, double> table_range() const;

private:
    double plasma_ = 0.0;
    std::vector<double> table_omega_;
    std::vector<double> table_eps_;
};

// Gap |z| < d of permittivity eps_g between two identical claddings. Gaussian units with a
// user-chosen length and time unit; `hbar` is expressed in the same units (1 by default).
struct CavityGeometry {
    double k = 1.0;
    double area = 1.0;
    ModulationSchedule half_height = ModulationSchedule::constant(1.0);
    double gap_permittivity = 1.0;
    Cladding cladding = Cladding::drude(1.0);
    double hbar = 1.0;
    std::optional<double> speed_of_light;  // enables the electrostatic-validity warning

    void validate() const;
    // Throws DomainError unless k d(t) lies in (1e-6, 50).
    double kd(double t) const;
};

struct PlasmonMode {
    Parity parity;
    double frequency;
    double k;
    double half_height;
    double potential_amplitude;       // |Phi_s| or |Phi_as|
    Eigen::Vector3cd boundary_field;  // E at z = -d; x along k, z normal to the plates
    std::vector<std::string> warnings;

    // E(z) from E = -grad Phi with the in-plane factor e^{i k x} removed.
    Eigen::Vector3cd field(double z) const;
};

// Root of tanh(kd) = -eps/eps_g (symmetric) or coth(kd) = -eps/eps_g (antisymmetric) at d = d(t).
double dispersion_solve(const CavityGeometry& g, double t, Parity parity);

// Electrostatic normalisation S int d(omega eps)/d omega |E|^2 dz = 4 pi hbar omega.
PlasmonMode mode_normalization(const CavityGeometry& g, double t, Parity parity, double omega);
PlasmonMode plasmon_mode(const CavityGeometry& g, double t, Parity parity);

// S int eps |E|^2 dz relative to S int |eps| |E|^2 dz; vanishes for an exact electrostatic mode.
double field_energy_residual(const CavityGeometry& g, const PlasmonMode& mode);

struct ModeSchedules {
    ModulationSchedule frequency;  // omega(t)
    ModulationSchedule rabi;       // |dipole . E(t)| / hbar at z = -d
    std::vector<double> times;
    std::vector<double> frequency_samples;
    std::vector<double> rabi_samples;
    std::vector<std::string> warnings;
};

// Samples the mode on `times` and returns piecewise-linear schedules. Requires at least 16 samples
// per modulation period of a sinusoidal d(t).
ModeSchedules coupling_schedule(const CavityGeometry& g, const Eigen::Vector3d& dipole, Parity parity,
                                std::span<const double> times);

struct PlasmonRow {
    double t;
    double omega_s;
    double omega_as;
    double field_s;
    double field_as;
    double rabi;  // for the requested parity
};

std::vector<PlasmonRow> plasmon_table(const CavityGeometry& g, const Eigen::Vector3d& dipole, Parity parity,
                                      std::span<const double> times);

}  // namespace tvcqed
