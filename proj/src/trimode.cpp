#include "tvcqed/trimode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "tvcqed/errors.hpp"
#include "tvcqed/numerics/bessel.hpp"

namespace tvcqed {
namespace {

constexpr double kResonanceTolerance = 1e-9;
constexpr double kPi = 3.14159265358979323846;

// Mean, depth, frequency and phase of a detuning delta(t) = mean - depth sin(Omega t + phase).
struct DetuningSinusoid {
    double mean;
    double depth;
    std::optional<double> mod_frequency;
    double phase;
};

DetuningSinusoid as_sinusoid(const ModulationSchedule& s, const char* name) {
    if (auto v = s.constant_value()) return {*v, 0.0, std::nullopt, 0.0};
    if (auto q = s.sinusoidal_params()) return {q->mean, q->depth, q->mod_frequency, q->phase};
    throw ValidationError(std::string("reduced system needs a constant or sinusoidal ") + name +
                          " schedule, got " + s.describe());
}

double reference_value(const ModulationSchedule& s) {
    if (auto m = s.mean()) return *m;
    return s(std::max(0.0, s.domain().first));
}

}  // namespace

void TrimodeParams::validate() const {
    if (target == ModulationTarget::atom) {
        if (!omega_a.constant_value() || !omega_b.constant_value()) {
            throw ValidationError("atom modulation requires constant omega_a and omega_b schedules");
        }
    }
    if (!std::isfinite(rabi_a.real()) || !std::isfinite(rabi_a.imag()) ||
        !std::isfinite(rabi_b.real()) || !std::isfinite(rabi_b.imag())) {
        throw ValidationError("couplings must be finite");
    }
}

std::vector<std::string> TrimodeParams::warnings() const {
    std::vector<std::string> out;
    const double wmin = std::min(std::abs(reference_value(omega_a)), std::abs(reference_value(omega_b)));
    const double r = std::max(std::abs(rabi_a), std::abs(rabi_b));
    if (r >= 0.1 * wmin) {
        std::ostringstream msg;
        msg << "RWA validity: max |Omega_R| = " << r << " is not below 0.1 * min(omega_a, omega_b) = "
            << 0.1 * wmin;
        out.push_back(msg.str());
    }
    return out;
}

double TrimodeState::norm() const {
    return std::norm(c000) + std::norm(c001) + std::norm(c100) + std::norm(c010);
}

std::array<double, 4> TrimodeState::populations() const {
    return {std::norm(c000), std::norm(c001), std::norm(c100), std::norm(c010)};
}

std::array<double, 4> frame_phases(const TrimodeParams& p, double t) {
    const double pa = p.omega_a.phase_integral(0.0, t);
    const double pb = p.omega_b.phase_integral(0.0, t);
    const double pw = p.transition.phase_integral(0.0, t);
    return {0.5 * (pa + pb), 0.5 * (pa + pb) + pw, 1.5 * pa + 0.5 * pb, 0.5 * pa + 1.5 * pb};
}

TrimodeState to_lab(const TrimodeParams& p, const TrimodeState& g, double t) {
    const auto th = frame_phases(p, t);
    return {g.c000 * std::polar(1.0, -th[0]), g.c001 * std::polar(1.0, -th[1]),
            g.c100 * std::polar(1.0, -th[2]), g.c010 * std::polar(1.0, -th[3])};
}

TrimodeState to_rotating(const TrimodeParams& p, const TrimodeState& c, double t) {
    const auto th = frame_phases(p, t);
    return {c.c000 * std::polar(1.0, th[0]), c.c001 * std::polar(1.0, th[1]),
            c.c100 * std::polar(1.0, th[2]), c.c010 * std::polar(1.0, th[3])};
}

Eigen::Matrix3cd interaction_matrix(const TrimodeParams& p, double t) {
    const double pw = p.transition.phase_integral(0.0, t);
    const double phi_a = p.omega_a.phase_integral(0.0, t) - pw;
    const double phi_b = p.omega_b.phase_integral(0.0, t) - pw;
    const cplx ha = -p.rabi_a * std::polar(1.0, -phi_a);
    const cplx hb = -p.rabi_b * std::polar(1.0, -phi_b);
    Eigen::Matrix3cd h;
    h << 0.0, ha, hb, std::conj(ha), 0.0, 0.0, std::conj(hb), 0.0, 0.0;
    return h;
}

TrimodeTrajectory integrate_trimode_full(const TrimodeParams& p, const TrimodeState& init,
                                         std::span<const double> sample_times,
                                         const numerics::IntegratorConfig& cfg) {
    p.validate();
    if (std::abs(init.norm() - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "trimode initial state not normalized: norm = " << init.norm();
        throw ValidationError(msg.str());
    }
    TrimodeTrajectory out;
    if (sample_times.empty()) return out;
    const TrimodeState g0 = to_rotating(p, init, sample_times.front());

    auto rhs = [&](double t, std::span<const cplx> y, std::span<cplx> dy) {
        const double pw = p.transition.phase_integral(0.0, t);
        const cplx ea = std::polar(1.0, -(p.omega_a.phase_integral(0.0, t) - pw));
        const cplx eb = std::polar(1.0, -(p.omega_b.phase_integral(0.0, t) - pw));
        const cplx i(0.0, 1.0);
        dy[0] = 0.0;
        dy[1] = i * (p.rabi_a * ea * y[2] + p.rabi_b * eb * y[3]);
        dy[2] = i * std::conj(p.rabi_a * ea) * y[1];
        dy[3] = i * std::conj(p.rabi_b * eb) * y[1];
    };
    const auto y0 = g0.to_array();
    out.samples.reserve(sample_times.size());
    out.stats = numerics::integrate_complex_ode(
        rhs, y0, sample_times, cfg, [&](std::size_t, double t, std::span<const cplx> y) {
            const auto g = TrimodeState::from_array(y);
            out.samples.push_back({t, to_lab(p, g, t), g});
        });
    return out;
}

Eigen::Matrix3cd ReducedSystem::hamiltonian() const {
    Eigen::Matrix3cd h;
    h << 0.0, -r_a0, -r_bm, -std::conj(r_a0), 0.0, 0.0, -std::conj(r_bm), 0.0, 0.0;
    return h;
}

cplx resonant_sideband(double depth, double mod_frequency, double phase, int m) {
    const double z = depth / mod_frequency;
    const int am = std::abs(m);
    cplx prefactor(1.0, 0.0);
    for (int k = 0; k < am; ++k) prefactor *= cplx(0.0, -1.0);
    return prefactor * numerics::bessel_j(am, z) * std::polar(1.0, z * std::cos(phase) - m * phase);
}

double cumulative_rabi(cplx r_a0, cplx r_bm) { return std::sqrt(std::norm(r_a0) + std::norm(r_bm)); }

ReducedSystem reduced_resonant_system(const TrimodeParams& p) {
    p.validate();
    DetuningSinusoid da, db;
    double w_mean = 0.0;
    if (p.target == ModulationTarget::cavity) {
        const auto w = p.transition.constant_value();
        if (!w) {
            throw ValidationError("cavity modulation requires a constant transition frequency, got " +
                                  p.transition.describe());
        }
        w_mean = *w;
        da = as_sinusoid(p.omega_a, "omega_a");
        db = as_sinusoid(p.omega_b, "omega_b");
        da.mean -= w_mean;
        db.mean -= w_mean;
    } else {
        const auto w = as_sinusoid(p.transition, "transition");
        w_mean = w.mean;
        // omega - (W - D sin(x)) = (omega - W) - D sin(x + pi)
        const double wa = *p.omega_a.constant_value();
        const double wb = *p.omega_b.constant_value();
        da = {wa - w.mean, w.depth, w.mod_frequency, w.phase + kPi};
        db = {wb - w.mean, w.depth, w.mod_frequency, w.phase + kPi};
    }

    std::optional<double> mod = da.mod_frequency ? da.mod_frequency : db.mod_frequency;
    if (da.mod_frequency && db.mod_frequency &&
        std::abs(*da.mod_frequency - *db.mod_frequency) > kResonanceTolerance * *da.mod_frequency) {
        std::ostringstream msg;
        msg << "modes are modulated at different frequencies (" << *da.mod_frequency << " vs "
            << *db.mod_frequency << "); a single harmonic resonance needs a common Omega";
        throw ValidationError(msg.str());
    }
    const int m = p.harmonic_order;
    if (!mod && m != 0) {
        throw ValidationError("mod_frequency required: harmonic order m = " + std::to_string(m) +
                              " needs a sinusoidal schedule");
    }
    const double omega_mod = mod.value_or(0.0);

    const double scale = std::abs(w_mean);
    std::ostringstream errors;
    if (std::abs(da.mean) > kResonanceTolerance * scale) {
        errors << "resonance condition omega_a = W violated: omega_a = " << da.mean + w_mean
               << ", W = " << w_mean << " (residual " << da.mean << "); ";
    }
    if (std::abs(db.mean + m * omega_mod) > kResonanceTolerance * scale) {
        errors << "resonance condition omega_b + m*Omega = W violated: omega_b + m*Omega = "
               << db.mean + w_mean + m * omega_mod << ", W = " << w_mean << " (residual "
               << db.mean + m * omega_mod << ")";
    }
    if (!errors.str().empty()) throw ValidationError(errors.str());

    ReducedSystem rs;
    rs.params = p;
    rs.m = m;
    rs.mod_frequency = omega_mod;
    if (mod) {
        rs.r_a0 = p.rabi_a * resonant_sideband(da.depth, omega_mod, da.phase, 0);
        rs.r_bm = p.rabi_b * resonant_sideband(db.depth, omega_mod, db.phase, m);
    } else {
        rs.r_a0 = p.rabi_a;
        rs.r_bm = p.rabi_b;
    }
    rs.cumulative_rabi = cumulative_rabi(rs.r_a0, rs.r_bm);
    rs.matrix = cplx(0.0, 1.0) * rs.hamiltonian();
    const double rmax = std::max(std::abs(p.rabi_a), std::abs(p.rabi_b));
    rs.validity_ratio = omega_mod > 0.0 ? rmax / omega_mod : std::numeric_limits<double>::infinity();
    if (mod && rs.validity_ratio > 0.1) {
        std::ostringstream msg;
        msg << "non-resonant harmonics not negligible: max |Omega_R| / Omega = " << rs.validity_ratio;
        rs.warnings.push_back(msg.str());
    }
    for (auto& w : p.warnings()) rs.warnings.push_back(std::move(w));
    return rs;
}

namespace {

// Orthonormal eigenvectors of H = [[0, Ra, Rb], [Ra*, 0, 0], [Rb*, 0, 0]] (the generator is
// e^{+iHt}): u0 for 0, up for +Omega, um for -Omega.
struct Eigenbasis {
    Eigen::Vector3cd u0, up, um;
    double omega;
};

Eigenbasis eigenbasis(cplx ra, cplx rb) {
    Eigenbasis e;
    e.omega = cumulative_rabi(ra, rb);
    const double s = e.omega;
    e.u0 << 0.0, rb / s, -ra / s;
    const double n = std::sqrt(2.0) * s;
    e.up << s / n, std::conj(ra) / n, std::conj(rb) / n;
    e.um << -s / n, std::conj(ra) / n, std::conj(rb) / n;
    return e;
}

}  // namespace

TrimodeState analytic_rotating(const ReducedSystem& rs, const TrimodeState& g0, double t) {
    if (t == 0.0 || rs.cumulative_rabi == 0.0) return g0;
    const auto e = eigenbasis(rs.r_a0, rs.r_bm);
    const Eigen::Vector3cd g(g0.c001, g0.c100, g0.c010);
    const Eigen::Vector3cd out = e.u0 * e.u0.dot(g) +
                                 e.up * (std::polar(1.0, e.omega * t) * e.up.dot(g)) +
                                 e.um * (std::polar(1.0, -e.omega * t) * e.um.dot(g));
    return {g0.c000, out(0), out(1), out(2)};
}

TrimodeState analytic_closed_solution(const ReducedSystem& rs, const TrimodeState& init, double t) {
    if (std::abs(init.norm() - 1.0) > 1e-12) {
        throw ValidationError("trimode initial state not normalized");
    }
    if (t == 0.0) return init;
    return to_lab(rs.params, analytic_rotating(rs, init, t), t);
}

ClosedSolutionConstants closed_solution_constants(const ReducedSystem& rs, const TrimodeState& init) {
    if (rs.r_a0 == cplx(0.0) || rs.r_bm == cplx(0.0)) {
        throw ValidationError("closed-solution constants need R_a0 != 0 and R_bm != 0");
    }
    const auto e = eigenbasis(rs.r_a0, rs.r_bm);
    const Eigen::Vector3cd g(init.c001, init.c100, init.c010);
    // Unnormalised vectors: v0 = u0 Omega / R_bm, v+- = u+- sqrt(2) Omega / R_a0^*.
    const double s = e.omega;
    return {e.u0.dot(g) * rs.r_bm / s, e.up.dot(g) * std::conj(rs.r_a0) / (std::sqrt(2.0) * s),
            e.um.dot(g) * std::conj(rs.r_a0) / (std::sqrt(2.0) * s)};
}

cplx transparency_condition(const ReducedSystem& rs, cplx c100) {
    if (rs.r_bm == cplx(0.0)) {
        throw ValidationError("R_bm = 0: mode b is decoupled and no transparency state involves it");
    }
    return -c100 * rs.r_a0 / rs.r_bm;
}

BranchTable eigenstructure_vs_detuning(cplx rabi_a, cplx rabi_b, double omega_b_minus_omega_a,
                                       std::span<const double> detunings, ModulationTarget target) {
    BranchTable out;
    const double dab = omega_b_minus_omega_a;
    Eigen::Matrix3cd prev_vecs;
    for (std::size_t g = 0; g < detunings.size(); ++g) {
        const double d = detunings[g];
        // Energies relative to (omega_a + omega_b)/2 + W at omega_a = W.
        const double e001 = target == ModulationTarget::cavity ? d : -d;
        const double e100 = target == ModulationTarget::cavity ? 2.0 * d : 0.0;
        const double e010 = target == ModulationTarget::cavity ? 2.0 * d + dab : dab;
        Eigen::Matrix3cd h;
        h << e001, -rabi_a, -rabi_b, -std::conj(rabi_a), e100, 0.0, -std::conj(rabi_b), 0.0, e010;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(h);
        const Eigen::Matrix3cd vecs = es.eigenvectors();
        std::array<int, 3> order{0, 1, 2};
        if (g > 0) {
            // Pick the assignment of new eigenvectors to existing branches with the largest total overlap.
            std::array<int, 3> perm{0, 1, 2};
            double best = -1.0;
            do {
                double score = 0.0;
                for (int b = 0; b < 3; ++b) score += std::norm(prev_vecs.col(b).dot(vecs.col(perm[b])));
                if (score > best + 1e-15) {
                    best = score;
                    order = perm;
                }
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
        std::array<double, 3> freq{};
        std::array<std::array<double, 3>, 3> weight{};
        Eigen::Matrix3cd ordered;
        for (int b = 0; b < 3; ++b) {
            freq[b] = es.eigenvalues()(order[b]);
            Eigen::Vector3cd v = vecs.col(order[b]);
            if (g > 0) {
                // Fix the arbitrary eigenvector phase against the previous grid point.
                const cplx ov = prev_vecs.col(b).dot(v);
                if (std::abs(ov) > 0.0) v *= std::conj(ov) / std::abs(ov);
            }
            ordered.col(b) = v;
            for (int k = 0; k < 3; ++k) weight[b][k] = std::abs(v(k));
        }
        prev_vecs = ordered;
        out.detuning.push_back(d);
        out.frequency.push_back(freq);
        out.weight.push_back(weight);
    }
    return out;
}

InteractionHamiltonian::InteractionHamiltonian(TrimodeParams full) : source_(std::move(full)) {
    std::get<TrimodeParams>(source_).validate();
    constant_.setZero();
}

InteractionHamiltonian::InteractionHamiltonian(ReducedSystem reduced) : source_(std::move(reduced)) {
    constant_ = std::get<ReducedSystem>(source_).hamiltonian();
}

Eigen::Matrix3cd InteractionHamiltonian::at(double t) const {
    if (const auto* full = std::get_if<TrimodeParams>(&source_)) return interaction_matrix(*full, t);
    return constant_;
}

const TrimodeParams& InteractionHamiltonian::params() const {
    if (const auto* full = std::get_if<TrimodeParams>(&source_)) return *full;
    return std::get<ReducedSystem>(source_).params;
}

}  // namespace tvcqed
