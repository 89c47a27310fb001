#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tvcqed {

using cplx = std::complex<double>;

// A time-dependent real parameter (frequency, detuning or coupling) in rad per time unit.
// Immutable value type; copies share piecewise data.
class ModulationSchedule {
public:
    enum class Kind { constant, sinusoidal, linear_sweep, piecewise };

    struct Sinusoidal {
        double mean;
        double depth;
        double mod_frequency;
        double phase;
    };

    struct LinearSweep {
        double rate;
        double offset;
    };

    ModulationSchedule() = default;

    static ModulationSchedule constant(double value);
    // mean - depth * sin(mod_frequency * t + phase)
    static ModulationSchedule sinusoidal(double mean, double depth, double mod_frequency,
                                         double phase = 0.0);
    // rate * t + offset
    static ModulationSchedule linear_sweep(double rate, double offset = 0.0);
    // Each piece starts at an absolute time and is evaluated at absolute time. The last piece runs
    // to `end` when given, otherwise forever.
    static ModulationSchedule piecewise(std::vector<std::pair<double, ModulationSchedule>> pieces,
                                        std::optional<double> end = std::nullopt);

    Kind kind() const noexcept { return kind_; }

    double operator()(double t) const;
    double phase_integral(double t0, double t1) const;

    std::optional<double> constant_value() const;
    std::optional<Sinusoidal> sinusoidal_params() const;
    std::optional<LinearSweep> linear_params() const;

    // Time average for constant and sinusoidal kinds.
    std::optional<double> mean() const;

    // [start, end] of the evaluation domain (infinite ends for unbounded kinds).
    std::pair<double, double> domain() const;

    std::string describe() const;

private:
    struct PiecewiseData;

    Kind kind_ = Kind::constant;
    double a_ = 0.0;  // value | mean | rate
    double b_ = 0.0;  // depth | offset
    double c_ = 0.0;  // mod_frequency
    double d_ = 0.0;  // phase
    std::shared_ptr<const PiecewiseData> pieces_;

    double primitive(double t) const;
    void check_domain(double t) const;
};

double eval_schedule(const ModulationSchedule& s, double t);
double phase_integral(const ModulationSchedule& s, double t0, double t1);

// Fourier amplitudes R_n of the phase factor of a sinusoidally modulated coupling.
struct HarmonicAmplitudes {
    cplx base_rabi;
    int n_max = 0;
    std::vector<cplx> values;  // index n + n_max
    std::optional<std::string> warning;

    cplx operator[](int n) const;
    // 1 - sum |R_n|^2 / |base|^2 over the retained harmonics.
    double sum_rule_deficit() const;
};

inline constexpr int kDefaultHarmonicOrder = 20;

HarmonicAmplitudes harmonic_amplitudes(cplx base_rabi, double depth, double mod_frequency,
                                       int n_max = kDefaultHarmonicOrder);

}  // namespace tvcqed
