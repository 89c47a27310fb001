#include "tvcqed/numerics/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tvcqed/errors.hpp"

namespace tvcqed::numerics {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense output (Hairer, Norsett & Wanner, contd5).
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kMinFactor = 0.2;   // largest step shrink is 1/5
constexpr double kMaxFactor = 10.0;  // largest step growth

using Vec = std::vector<cplx>;

double scaled_norm(const Vec& v, const Vec& y0, const Vec& y1, const IntegratorConfig& cfg) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double sk = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double r = std::abs(v[i]) / sk;
        acc += r * r;
    }
    return v.empty() ? 0.0 : std::sqrt(acc / static_cast<double>(v.size()));
}

}  // namespace

void IntegratorConfig::validate() const {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-3)) {
        throw ValidationError("integrator rel_tol must lie in (0, 1e-3]");
    }
    if (!(abs_tol > 0.0)) throw ValidationError("integrator abs_tol must be positive");
    if (!(max_step > 0.0)) throw ValidationError("integrator max_step must be positive");
    if (initial_step < 0.0) throw ValidationError("integrator initial_step must be >= 0");
}

std::vector<double> linspace(double t0, double t1, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = t0;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    if (n > 0) out.back() = t1;
    return out;
}

IntegrationStats integrate_complex_ode(const ComplexRhs& f, std::span<const cplx> y0,
                                       std::span<const double> sample_times,
                                       const IntegratorConfig& cfg, const SampleObserver& observe) {
    cfg.validate();
    IntegrationStats stats;
    if (sample_times.empty()) return stats;
    for (std::size_t i = 1; i < sample_times.size(); ++i) {
        if (sample_times[i] < sample_times[i - 1]) {
            throw ValidationError("sample times must be non-decreasing");
        }
    }

    const std::size_t n = y0.size();
    Vec y(y0.begin(), y0.end()), y1(n), ytmp(n), err(n);
    Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    Vec r1(n), r2(n), r3(n), r4(n), r5(n);

    auto eval = [&](double t, const Vec& in, Vec& out) {
        f(t, in, out);
        ++stats.rhs_calls;
    };

    double t = sample_times.front();
    const double t_end = sample_times.back();
    std::size_t next = 0;
    while (next < sample_times.size() && sample_times[next] <= t) {
        observe(next, sample_times[next], y);
        ++next;
    }
    if (next == sample_times.size()) return stats;

    eval(t, y, k1);

    double h = cfg.initial_step;
    if (h <= 0.0) {
        // Initial step heuristic (Hairer, Norsett & Wanner II.4).
        const double d0 = scaled_norm(y, y, y, cfg);
        const double df = scaled_norm(k1, y, y, cfg);
        double h0 = (d0 < 1e-5 || df < 1e-5) ? 1e-6 : 0.01 * d0 / df;
        h0 = std::min({h0, cfg.max_step, t_end - t});
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h0 * k1[i];
        eval(t + h0, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) err[i] = (k2[i] - k1[i]) / h0;
        const double d2 = scaled_norm(err, y, y, cfg);
        const double dm = std::max(df, d2);
        const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
        h = std::min(100.0 * h0, h1);
    }
    h = std::min({h, cfg.max_step, t_end - t});

    double err_old = 1e-4;
    bool last_rejected = false;

    while (next < sample_times.size()) {
        if (stats.accepted + stats.rejected >= cfg.max_steps) {
            throw NumericalError("integrator exceeded max_steps", t);
        }
        const double target = cfg.clip_to_samples ? sample_times[next] : t_end;
        const double remaining = target - t;
        if (h >= remaining * (1.0 - 1e-12)) h = remaining;
        if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0)) {
            throw NumericalError("step size underflow", t);
        }

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        eval(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        eval(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        eval(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        eval(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        const double t_new = (h == remaining) ? target : t + h;
        eval(t_new, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        eval(t_new, y1, k7);
        for (std::size_t i = 0; i < n; ++i)
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);

        const double e = scaled_norm(err, y, y1, cfg);
        if (!std::isfinite(e)) {
            throw NumericalError("non-finite derivative or state", t);
        }
        const double fac11 = std::pow(e, kExpo);

        if (e <= 1.0) {
            // Dense output coefficients on [t, t_new].
            for (std::size_t i = 0; i < n; ++i) {
                const cplx ydiff = y1[i] - y[i];
                const cplx bspl = h * k1[i] - ydiff;
                r1[i] = y[i];
                r2[i] = ydiff;
                r3[i] = bspl;
                r4[i] = ydiff - h * k7[i] - bspl;
                r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                             d7 * k7[i]);
            }
            while (next < sample_times.size() && sample_times[next] <= t_new) {
                const double ts = sample_times[next];
                if (ts == t_new) {
                    observe(next, ts, y1);
                } else {
                    const double th = (ts - t) / h;
                    const double th1 = 1.0 - th;
                    for (std::size_t i = 0; i < n; ++i) {
                        ytmp[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
                    }
                    observe(next, ts, ytmp);
                }
                ++next;
            }

            ++stats.accepted;
            t = t_new;
            y.swap(y1);
            k1.swap(k7);

            double fac = fac11 / std::pow(err_old, kBeta);
            fac = std::clamp(fac / kSafety, 1.0 / kMaxFactor, 1.0 / kMinFactor);
            double h_new = h / fac;
            if (last_rejected) h_new = std::min(h_new, h);
            err_old = std::max(e, 1e-4);
            last_rejected = false;
            h = std::min(h_new, cfg.max_step);
        } else {
            ++stats.rejected;
            last_rejected = true;
            h /= std::min(1.0 / kMinFactor, fac11 / kSafety);
        }
    }
    return stats;
}

DenseTrajectory integrate_complex_ode(const ComplexRhs& f, std::span<const cplx> y0,
                                      std::span<const double> sample_times,
                                      const IntegratorConfig& cfg) {
    DenseTrajectory out;
    out.times.reserve(sample_times.size());
    out.states.reserve(sample_times.size());
    out.stats = integrate_complex_ode(f, y0, sample_times, cfg,
                                      [&](std::size_t, double t, std::span<const cplx> y) {
                                          out.times.push_back(t);
                                          out.states.emplace_back(y.begin(), y.end());
                                      });
    return out;
}

}  // namespace tvcqed::numerics
