#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace tvcqed::numerics {

using cplx = std::complex<double>;

struct IntegratorConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0;  // 0 selects the step automatically
    std::size_t max_steps = 50'000'000;
    // Land a step exactly on every sample time instead of interpolating with dense output.
    bool clip_to_samples = false;

    void validate() const;
};

using ComplexRhs = std::function<void(double t, std::span<const cplx> y, std::span<cplx> dydt)>;
using SampleObserver = std::function<void(std::size_t index, double t, std::span<const cplx> y)>;

struct IntegrationStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_calls = 0;
};

struct DenseTrajectory {
    std::vector<double> times;
    std::vector<std::vector<cplx>> states;
    IntegrationStats stats;
};

// Dormand-Prince 5(4) with PI step control and 4th-order dense output. `sample_times` must be
// non-decreasing; the integration starts at sample_times.front() from y0 and the observer sees the
// state at every sample time (the first one is y0 itself).
IntegrationStats integrate_complex_ode(const ComplexRhs& f, std::span<const cplx> y0,
                                       std::span<const double> sample_times,
                                       const IntegratorConfig& cfg, const SampleObserver& observe);

DenseTrajectory integrate_complex_ode(const ComplexRhs& f, std::span<const cplx> y0,
                                      std::span<const double> sample_times,
                                      const IntegratorConfig& cfg);

// n evenly spaced points on [t0, t1], both ends included.
std::vector<double> linspace(double t0, double t1, std::size_t n);

}  // namespace tvcqed::numerics
