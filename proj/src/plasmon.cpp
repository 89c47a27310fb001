#include "tvcqed/plasmon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tvcqed/errors.hpp"
#include "tvcqed/numerics/roots.hpp"

namespace tvcqed {

const char* to_string(Parity p) { return p == Parity::symmetric ? "symmetric" : "antisymmetric"; }

Cladding Cladding::drude(double plasma_frequency) {
    if (!(plasma_frequency > 0.0) || !std::isfinite(plasma_frequency)) {
        throw ValidationError("plasma frequency must be finite and > 0");
    }
    Cladding c;
    c.plasma_ = plasma_frequency;
    return c;
}

Cladding Cladding::tabulated(std::vector<double> omega, std::vector<double> epsilon) {
    if (omega.size() != epsilon.size() || omega.size() < 2) {
        throw ValidationError("tabulated permittivity needs >= 2 (omega, eps) pairs of equal length");
    }
    for (std::size_t i = 0; i < omega.size(); ++i) {
        if (!std::isfinite(omega[i]) || !std::isfinite(epsilon[i])) {
            throw ValidationError("tabulated permittivity contains non-finite values");
        }
        if (i > 0 && !(omega[i] > omega[i - 1])) {
            throw ValidationError("tabulated permittivity frequencies must be strictly increasing");
        }
    }
    if (omega.front() <= 0.0) throw ValidationError("tabulated permittivity frequencies must be > 0");
    Cladding c;
    c.table_omega_ = std::move(omega);
    c.table_eps_ = std::move(epsilon);
    return c;
}

std::pair<double, double> Cladding::table_range() const {
    if (is_drude()) return {0.0, plasma_};
    return {table_omega_.front(), table_omega_.back()};
}

namespace {

std::size_t segment(const std::vector<double>& xs, double x) {
    if (x < xs.front() || x > xs.back()) {
        std::ostringstream msg;
        msg << "frequency " << x << " outside the permittivity table [" << xs.front() << ", " << xs.back() << "]";
        throw DomainError(msg.str());
    }
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    return std::clamp<std::size_t>(i, 1, xs.size() - 1) - 1;
}

}  // namespace

double Cladding::epsilon(double omega) const {
    if (is_drude()) return 1.0 - plasma_ * plasma_ / (omega * omega);
    const std::size_t i = segment(table_omega_, omega);
    const double u = (omega - table_omega_[i]) / (table_omega_[i + 1] - table_omega_[i]);
    return table_eps_[i] + u * (table_eps_[i + 1] - table_eps_[i]);
}

double Cladding::d_omega_epsilon(double omega) const {
    if (is_drude()) return 1.0 + plasma_ * plasma_ / (omega * omega);
    const std::size_t i = segment(table_omega_, omega);
    const double slope = (table_eps_[i + 1] - table_eps_[i]) / (table_omega_[i + 1] - table_omega_[i]);
    return epsilon(omega) + omega * slope;
}

void CavityGeometry::validate() const {
    if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("cavity k must be finite and > 0");
    if (!(area > 0.0) || !std::isfinite(area)) throw ValidationError("cavity area must be finite and > 0");
    if (!(gap_permittivity > 0.0)) throw ValidationError("gap permittivity must be > 0");
    if (!(hbar > 0.0)) throw ValidationError("hbar must be > 0");
    if (speed_of_light && !(*speed_of_light > 0.0)) throw ValidationError("speed_of_light must be > 0");
}

double CavityGeometry::kd(double t) const {
    const double v = k * half_height(t);
    if (!(v > 1e-6 && v < 50.0)) {
        std::ostringstream msg;
        msg << "k*d = " << v << " at t=" << t << " outside (1e-6, 50)";
        throw DomainError(msg.str());
    }
    return v;
}

namespace {

double parity_factor(double kd, Parity p) { return p == Parity::symmetric ? std::tanh(kd) : 1.0 / std::tanh(kd); }

// Bisection bracket on which eps/eps_g + factor changes sign.
std::pair<double, double> bracket(const CavityGeometry& g, Parity p) {
    const auto& c = g.cladding;
    if (!c.is_drude()) return c.table_range();
    const double wpl = c.plasma_frequency();
    const double surface = wpl / std::sqrt(1.0 + g.gap_permittivity);
    if (p == Parity::symmetric) return {surface, wpl};
    return {1e-9 * wpl, surface};
}

}  // namespace

double dispersion_solve(const CavityGeometry& g, double t, Parity parity) {
    g.validate();
    const double kd = g.kd(t);
    const double factor = parity_factor(kd, parity);
    auto f = [&](double w) { return g.cladding.epsilon(w) / g.gap_permittivity + factor; };
    const auto [lo, hi] = bracket(g, parity);
    if (g.cladding.is_drude()) {
        // Exact brackets; when tanh or coth rounds to 1 the root sits on an end point.
        if (std::abs(f(lo)) <= 1e-14) return lo;
        if (std::abs(f(hi)) <= 1e-14) return hi;
    }
    try {
        return numerics::find_root_bracketed(f, lo, hi, 1e-13);
    } catch (const BracketError&) {
        std::ostringstream msg;
        msg << "no " << to_string(parity) << " plasmon mode: eps/eps_g + " << factor << " keeps its sign on ["
            << lo << ", " << hi << "] (kd = " << kd << ")";
        throw NumericalError(msg.str(), t);
    }
}

Eigen::Vector3cd PlasmonMode::field(double z) const {
    const double phi = potential_amplitude;
    const cplx i(0.0, 1.0);
    const double d = half_height;
    Eigen::Vector3cd e;
    if (std::abs(z) <= d) {
        const double c = std::cosh(k * z), s = std::sinh(k * z);
        if (parity == Parity::symmetric) {
            e << -i * k * c * phi, 0.0, -k * s * phi;
        } else {
            e << -i * k * s * phi, 0.0, -k * c * phi;
        }
        return e;
    }
    // Outside the potential is Phi(d) e^{-k(|z| - d)} with Phi(-d) = +-Phi(d).
    const double edge = parity == Parity::symmetric ? std::cosh(k * d) : std::sinh(k * d);
    const double decay = std::exp(-k * (std::abs(z) - d));
    const double sign = (z < 0.0 && parity == Parity::antisymmetric) ? -1.0 : 1.0;
    const double pot = sign * edge * phi * decay;
    const double dz = z > 0.0 ? -k * pot : k * pot;
    e << -i * k * pot, 0.0, -dz;
    return e;
}

namespace {

// k [d(omega eps_g)/d omega sinh(2kd) + 2 edge^2 d(omega eps)/d omega], edge = cosh or sinh.
double normalization_bracket(const CavityGeometry& g, double kd, Parity parity, double omega) {
    const double edge = parity == Parity::symmetric ? std::cosh(kd) : std::sinh(kd);
    return g.k * (g.gap_permittivity * std::sinh(2.0 * kd) + 2.0 * edge * edge * g.cladding.d_omega_epsilon(omega));
}

}  // namespace

PlasmonMode mode_normalization(const CavityGeometry& g, double t, Parity parity, double omega) {
    g.validate();
    const double kd = g.kd(t);
    if (!(omega > 0.0)) throw ValidationError("mode frequency must be > 0");
    const double residual = g.cladding.epsilon(omega) / g.gap_permittivity + parity_factor(kd, parity);
    if (std::abs(residual) > 1e-8 * std::max(1.0, parity_factor(kd, parity))) {
        std::ostringstream msg;
        msg << "omega = " << omega << " is not a " << to_string(parity) << " mode at kd = " << kd
            << " (dispersion residual " << residual << ")";
        throw ValidationError(msg.str());
    }
    const double br = normalization_bracket(g, kd, parity, omega);
    if (!(br > 0.0)) throw ValidationError("normalisation bracket is not positive; permittivity table is unphysical");

    PlasmonMode m;
    m.parity = parity;
    m.frequency = omega;
    m.k = g.k;
    m.half_height = g.half_height(t);
    m.potential_amplitude = std::sqrt(4.0 * std::numbers::pi * g.hbar * omega / (g.area * br));
    m.boundary_field = m.field(-m.half_height);
    if (g.speed_of_light) {
        const double c = *g.speed_of_light;
        const double scale = std::max(g.gap_permittivity, std::abs(g.cladding.epsilon(omega))) * omega / c;
        if (g.k < 10.0 * scale) {
            std::ostringstream msg;
            msg << "electrostatic approximation questionable: k = " << g.k << " < 10 * eps * omega / c = "
                << 10.0 * scale;
            m.warnings.push_back(msg.str());
        }
    }
    return m;
}

PlasmonMode plasmon_mode(const CavityGeometry& g, double t, Parity parity) {
    return mode_normalization(g, t, parity, dispersion_solve(g, t, parity));
}

double field_energy_residual(const CavityGeometry& g, const PlasmonMode& mode) {
    // Inside: k |Phi|^2 sinh(2kd) eps_g; outside (both sides): 2 k edge^2 |Phi|^2 eps.
    const double kd = mode.k * mode.half_height;
    const double edge = mode.parity == Parity::symmetric ? std::cosh(kd) : std::sinh(kd);
    const double inside = g.gap_permittivity * std::sinh(2.0 * kd);
    const double outside = 2.0 * edge * edge * g.cladding.epsilon(mode.frequency);
    return (inside + outside) / (std::abs(inside) + std::abs(outside));
}

ModeSchedules coupling_schedule(const CavityGeometry& g, const Eigen::Vector3d& dipole, Parity parity,
                                std::span<const double> times) {
    g.validate();
    if (times.size() < 2) throw ValidationError("coupling_schedule needs at least two sample times");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) throw ValidationError("coupling_schedule sample times must increase");
    }
    if (auto s = g.half_height.sinusoidal_params(); s && s->depth != 0.0 && s->mod_frequency > 0.0) {
        const double period = 2.0 * std::numbers::pi / s->mod_frequency;
        double widest = 0.0;
        for (std::size_t i = 1; i < times.size(); ++i) widest = std::max(widest, times[i] - times[i - 1]);
        if (widest > period / 16.0 * (1.0 + 1e-12)) {
            std::ostringstream msg;
            msg << "sample spacing " << widest << " exceeds 1/16 of the modulation period " << period;
            throw ValidationError(msg.str());
        }
    }

    ModeSchedules out;
    out.times.assign(times.begin(), times.end());
    double field_scale = 0.0;
    for (double t : times) {
        const auto mode = plasmon_mode(g, t, parity);
        field_scale = std::max(field_scale, mode.boundary_field.norm());
        out.frequency_samples.push_back(mode.frequency);
        out.rabi_samples.push_back(std::abs(dipole.cast<cplx>().dot(mode.boundary_field)) / g.hbar);
        for (const auto& w : mode.warnings) {
            if (std::find(out.warnings.begin(), out.warnings.end(), w) == out.warnings.end()) out.warnings.push_back(w);
        }
    }
    auto interpolate = [&](const std::vector<double>& v) {
        std::vector<std::pair<double, ModulationSchedule>> pieces;
        for (std::size_t i = 0; i + 1 < times.size(); ++i) {
            const double rate = (v[i + 1] - v[i]) / (times[i + 1] - times[i]);
            pieces.emplace_back(times[i], ModulationSchedule::linear_sweep(rate, v[i] - rate * times[i]));
        }
        return ModulationSchedule::piecewise(std::move(pieces), times.back());
    };
    out.frequency = interpolate(out.frequency_samples);
    out.rabi = interpolate(out.rabi_samples);
    const double peak = *std::max_element(out.rabi_samples.begin(), out.rabi_samples.end());
    if (peak <= 1e-14 * dipole.norm() * field_scale / g.hbar) {
        out.warnings.push_back("dipole is orthogonal to the boundary field: zero coupling");
    }
    return out;
}

std::vector<PlasmonRow> plasmon_table(const CavityGeometry& g, const Eigen::Vector3d& dipole, Parity parity,
                                      std::span<const double> times) {
    std::vector<PlasmonRow> rows;
    for (double t : times) {
        const auto s = plasmon_mode(g, t, Parity::symmetric);
        const auto a = plasmon_mode(g, t, Parity::antisymmetric);
        const auto& chosen = parity == Parity::symmetric ? s : a;
        rows.push_back({t, s.frequency, a.frequency, s.boundary_field.norm(), a.boundary_field.norm(),
                        std::abs(dipole.cast<cplx>().dot(chosen.boundary_field)) / g.hbar});
    }
    return rows;
}

}  // namespace tvcqed
