#include "tvcqed/open_system.hpp"

#include <algorithm>
#include <barrier>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>

#include "tvcqed/errors.hpp"
#include "tvcqed/numerics/rng.hpp"

namespace tvcqed {
namespace {

double representative(const ModulationSchedule& s) {
    if (auto m = s.mean()) return *m;
    return s(std::max(0.0, s.domain().first));
}

double bose(double omega, double temperature) {
    if (temperature == 0.0) return 0.0;
    if (std::isinf(temperature)) return std::numeric_limits<double>::infinity();
    return 1.0 / std::expm1(omega / temperature);
}

Eigen::Matrix4cd embed(const Eigen::Matrix3cd& h3) {
    Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
    h.block<3, 3>(1, 1) = h3;
    return h;
}

}  // namespace

void RelaxationRates::validate() const {
    for (double v : {gamma, gamma_el, mu_a, mu_b}) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("relaxation rates must be finite and >= 0");
    }
    for (double v : {temperature_atom, temperature_em}) {
        if (!(v >= 0.0)) throw ValidationError("reservoir temperatures must be >= 0");
    }
}

ReservoirFrequencies reservoir_frequencies(const TrimodeParams& p) {
    return {representative(p.transition), representative(p.omega_a), representative(p.omega_b)};
}

ThermalFactors thermal_factors(const RelaxationRates& r, const ReservoirFrequencies& f) {
    ThermalFactors out{1.0, 0.0, 0.0, 0.0};
    if (r.temperature_atom > 0.0) {
        const double b = std::isinf(r.temperature_atom) ? 1.0 : std::exp(-f.transition / r.temperature_atom);
        out.n0 = 1.0 / (1.0 + b);
        out.n1 = b / (1.0 + b);
    }
    out.nbar_a = bose(f.omega_a, r.temperature_em);
    out.nbar_b = bose(f.omega_b, r.temperature_em);
    return out;
}

double compose_rates(const RelaxationRates& r, int n_a, int n_b, int level, const ReservoirFrequencies& f) {
    if (n_a < 0 || n_b < 0) throw ValidationError("compose_rates: occupations must be >= 0");
    if (level != 0 && level != 1) throw ValidationError("compose_rates: level must be 0 or 1");
    const auto th = thermal_factors(r, f);
    auto mode = [](double mu, double nbar, int n) {
        if (mu == 0.0) return 0.0;
        return 0.5 * mu * (nbar * (n + 1) + (nbar + 1.0) * n);
    };
    double rate = mode(r.mu_a, th.nbar_a, n_a) + mode(r.mu_b, th.nbar_b, n_b);
    if (level == 0) {
        rate += 0.5 * r.gamma * th.n1;
    } else {
        rate += 0.5 * r.gamma * th.n0 + r.gamma_el;
    }
    return rate;
}

std::array<double, 4> manifold_rates(const RelaxationRates& r, const ReservoirFrequencies& f) {
    return {compose_rates(r, 0, 0, 0, f), compose_rates(r, 0, 0, 1, f), compose_rates(r, 1, 0, 0, f),
            compose_rates(r, 0, 1, 0, f)};
}

DyadicState DyadicState::pure(const TrimodeState& g) {
    Eigen::Vector4cd v(g.c000, g.c001, g.c100, g.c010);
    return {v * v.adjoint()};
}

std::array<double, 4> DyadicState::populations() const {
    return {m(0, 0).real(), m(1, 1).real(), m(2, 2).real(), m(3, 3).real()};
}

void DyadicState::validate(double tol) const {
    if ((m - m.adjoint()).norm() > tol) throw ValidationError("dyadic state is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m);
    if (es.eigenvalues().minCoeff() < -tol) {
        std::ostringstream msg;
        msg << "dyadic state is not positive semidefinite (min eigenvalue " << es.eigenvalues().minCoeff() << ")";
        throw ValidationError(msg.str());
    }
    if (std::abs(trace() - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg << "dyadic state trace " << trace() << " != 1";
        throw ValidationError(msg.str());
    }
}

Eigen::Matrix4cd noise_correlator(NoiseKind kind, const RelaxationRates& r, const ReservoirFrequencies& f,
                                  const Eigen::Matrix4cd& m) {
    Eigen::Matrix4cd d = Eigen::Matrix4cd::Zero();
    switch (kind) {
        case NoiseKind::zero_temperature: {
            // Inelastic parts of Lambda feed the ground state; dephasing feeds |001> back into itself.
            d(0, 0) = r.gamma * m(1, 1) + r.mu_a * m(2, 2) + r.mu_b * m(3, 3);
            d(1, 1) = 2.0 * r.gamma_el * m(1, 1);
            break;
        }
        case NoiseKind::population_preserving: {
            const auto lam = manifold_rates(r, f);
            for (int k = 0; k < 4; ++k) d(k, k) = 2.0 * lam[k] * m(k, k);
            break;
        }
        case NoiseKind::two_level_T1T2: {
            const auto th = thermal_factors(r, f);
            d(0, 0) = r.gamma * th.n0 * m(1, 1);
            d(1, 1) = r.gamma * th.n1 * m(0, 0) + 2.0 * r.gamma_el * m(1, 1);
            break;
        }
    }
    return d;
}

namespace {

void check_noise_model(NoiseKind kind, const RelaxationRates& r) {
    r.validate();
    if (kind == NoiseKind::zero_temperature && !r.zero_temperature()) {
        throw ValidationError("zero_temperature noise model needs T_atom = T_em = 0");
    }
    if (kind == NoiseKind::two_level_T1T2 && (r.mu_a != 0.0 || r.mu_b != 0.0)) {
        throw ValidationError("two_level_T1T2 noise model describes the emitter only; set mu_a = mu_b = 0");
    }
}

}  // namespace

DyadicSeries integrate_dyadics(const InteractionHamiltonian& h, const RelaxationRates& r, NoiseKind kind,
                               const DyadicState& init, std::span<const double> sample_times,
                               const numerics::IntegratorConfig& cfg) {
    check_noise_model(kind, r);
    init.validate();
    const auto freqs = reservoir_frequencies(h.params());
    const auto lam = manifold_rates(r, freqs);
    const Eigen::Vector4d lam_v(lam[0], lam[1], lam[2], lam[3]);

    using Map = Eigen::Map<const Eigen::Matrix4cd>;
    using MutMap = Eigen::Map<Eigen::Matrix4cd>;
    auto rhs = [&](double t, std::span<const cplx> y, std::span<cplx> dy) {
        const Map m(y.data());
        const Eigen::Matrix4cd hm = embed(h.at(t)) * m;
        MutMap out(dy.data());
        out = cplx(0.0, -1.0) * (hm - hm.adjoint());
        out -= lam_v.asDiagonal() * m + m * lam_v.asDiagonal();
        out += noise_correlator(kind, r, freqs, m);
    };

    DyadicSeries series;
    series.times.reserve(sample_times.size());
    series.states.reserve(sample_times.size());
    std::vector<cplx> y0(16);
    MutMap(y0.data()) = init.m;
    series.stats = numerics::integrate_complex_ode(
        rhs, y0, sample_times, cfg, [&](std::size_t, double t, std::span<const cplx> y) {
            const Eigen::Matrix4cd m = Map(y.data());
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
            if (es.eigenvalues().minCoeff() < -1e-8) {
                std::ostringstream msg;
                msg << "dyadic state lost positivity (min eigenvalue " << es.eigenvalues().minCoeff() << ")";
                throw NumericalError(msg.str(), t);
            }
            series.times.push_back(t);
            series.states.push_back(m);
        });
    return series;
}

Eigen::Matrix4cd dyadic_to_lab(const TrimodeParams& p, const Eigen::Matrix4cd& m, double t) {
    const auto th = frame_phases(p, t);
    Eigen::Matrix4cd out;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) out(a, b) = m(a, b) * std::polar(1.0, th[b] - th[a]);
    }
    return out;
}

unsigned thread_count_from_env() {
    if (const char* env = std::getenv("TVCQED_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<unsigned>(std::min<long>(v, 256));
    }
    return 1;
}

EnsembleStatistics integrate_trajectories(const InteractionHamiltonian& h, const RelaxationRates& r,
                                          NoiseKind kind, const TrimodeState& init,
                                          std::span<const double> sample_times,
                                          const TrajectoryOptions& opts) {
    r.validate();
    if (!r.zero_temperature() || kind != NoiseKind::zero_temperature) {
        throw ValidationError(
            "trajectory sampling supports only the zero_temperature noise model at T = 0; use integrate_dyadics");
    }
    if (opts.n_traj < 1) throw ValidationError("n_traj must be >= 1");
    if (std::abs(init.norm() - 1.0) > 1e-12) throw ValidationError("trajectory initial state not normalized");
    for (std::size_t i = 1; i < sample_times.size(); ++i) {
        if (sample_times[i] < sample_times[i - 1]) throw ValidationError("sample times must be non-decreasing");
    }

    EnsembleStatistics out;
    out.n_traj = opts.n_traj;
    if (sample_times.empty()) return out;

    const auto freqs = reservoir_frequencies(h.params());
    const auto lam = manifold_rates(r, freqs);
    const Eigen::Vector3d lam3(lam[1], lam[2], lam[3]);

    // Step size: 0.01 over the fastest rate among damping, coupling and rotating-frame detunings.
    double fastest = std::max({lam[1], lam[2], lam[3]});
    const double t_first = sample_times.front(), t_last = sample_times.back();
    for (int k = 0; k <= 64; ++k) {
        const double t = t_first + (t_last - t_first) * k / 64.0;
        fastest = std::max(fastest, h.at(t).cwiseAbs().maxCoeff());
        if (!h.is_reduced()) {
            const auto& p = h.params();
            fastest = std::max({fastest, std::abs(p.omega_a(t) - p.transition(t)),
                                std::abs(p.omega_b(t) - p.transition(t))});
        }
    }
    double dt = fastest > 0.0 ? 0.01 / fastest : (t_last - t_first);
    if (opts.max_step > 0.0) dt = std::min(dt, opts.max_step);
    out.dt = dt;

    const std::size_t n = opts.n_traj;
    std::vector<Eigen::Vector4cd> state(n, Eigen::Vector4cd(init.c000, init.c001, init.c100, init.c010));
    const numerics::Philox4x32 gen(opts.seed);

    // Ensemble means used by the noise variance of the next step.
    std::array<double, 4> mean_pop = init.populations();

    auto record = [&](double t) {
        std::array<double, 4> s{}, s2{};
        double sn = 0.0, sn2 = 0.0;
        for (const auto& c : state) {
            double norm = 0.0;
            for (int k = 0; k < 4; ++k) {
                const double p = std::norm(c(k));
                s[k] += p;
                s2[k] += p * p;
                norm += p;
            }
            sn += norm;
            sn2 += norm * norm;
        }
        const double nn = static_cast<double>(n);
        auto se = [nn](double sum, double sum2) {
            if (nn < 2.0) return 0.0;
            const double mean = sum / nn;
            const double var = std::max(0.0, (sum2 - nn * mean * mean) / (nn - 1.0));
            return std::sqrt(var / nn);
        };
        std::array<double, 4> mp{}, sp{};
        for (int k = 0; k < 4; ++k) {
            mp[k] = s[k] / nn;
            sp[k] = se(s[k], s2[k]);
        }
        out.times.push_back(t);
        out.mean_population.push_back(mp);
        out.stderr_population.push_back(sp);
        out.mean_norm.push_back(sn / nn);
        out.stderr_norm.push_back(se(sn, sn2));
    };

    auto update_means = [&]() {
        std::array<double, 4> s{};
        for (const auto& c : state) {
            for (int k = 0; k < 4; ++k) s[k] += std::norm(c(k));
        }
        for (int k = 0; k < 4; ++k) mean_pop[k] = s[k] / static_cast<double>(n);
    };

    // One deterministic RK4 step of the damped excited amplitudes plus additive noise.
    auto advance = [&](std::size_t first, std::size_t last, double t, double h_step, std::uint64_t step,
                       double var000, double var001) {
        const Eigen::Matrix3cd h0 = h.at(t), hm = h.at(t + 0.5 * h_step), h1 = h.at(t + h_step);
        auto fh = [&](const Eigen::Matrix3cd& hh, const Eigen::Vector3cd& c) -> Eigen::Vector3cd {
            return cplx(0.0, -1.0) * (hh * c) - lam3.cwiseProduct(c);
        };
        const double s000 = std::sqrt(var000), s001 = std::sqrt(var001);
        for (std::size_t i = first; i < last; ++i) {
            Eigen::Vector4cd& c = state[i];
            const Eigen::Vector3cd x = c.tail<3>();
            const Eigen::Vector3cd k1 = fh(h0, x);
            const Eigen::Vector3cd k2 = fh(hm, x + 0.5 * h_step * k1);
            const Eigen::Vector3cd k3 = fh(hm, x + 0.5 * h_step * k2);
            const Eigen::Vector3cd k4 = fh(h1, x + h_step * k3);
            c.tail<3>() = x + (h_step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (s000 > 0.0) c(0) += s000 * numerics::complex_gaussian(gen, i, step, 0);
            if (s001 > 0.0) c(1) += s001 * numerics::complex_gaussian(gen, i, step, 1);
        }
    };

    const unsigned threads =
        static_cast<unsigned>(std::min<std::size_t>(opts.threads ? opts.threads : thread_count_from_env(), n));

    // Flatten the schedule of substeps so that every worker walks the same sequence.
    struct Step {
        double t;
        double h;
        std::size_t record_index;  // sample index recorded after this step, or npos
    };
    constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
    std::vector<Step> steps;
    std::size_t pending_records = 0;
    for (std::size_t i = 1; i < sample_times.size(); ++i) {
        const double a = sample_times[i - 1], b = sample_times[i];
        if (b == a) {
            if (steps.empty()) {
                ++pending_records;
            } else {
                steps.push_back({b, 0.0, i});
            }
            continue;
        }
        const auto sub = static_cast<std::size_t>(std::ceil((b - a) / dt - 1e-9));
        const double hs = (b - a) / static_cast<double>(sub);
        for (std::size_t k = 0; k < sub; ++k) {
            steps.push_back({a + k * hs, hs, k + 1 == sub ? i : npos});
        }
    }
    record(sample_times.front());
    for (std::size_t k = 0; k < pending_records; ++k) record(sample_times.front());

    auto variances = [&](double hs) {
        const double var000 = (r.gamma * mean_pop[1] + r.mu_a * mean_pop[2] + r.mu_b * mean_pop[3]) * hs;
        const double var001 = 2.0 * r.gamma_el * mean_pop[1] * hs;
        return std::pair{var000, var001};
    };

    if (threads <= 1) {
        for (std::size_t k = 0; k < steps.size(); ++k) {
            const auto& st = steps[k];
            if (st.h > 0.0) {
                const auto [v0, v1] = variances(st.h);
                advance(0, n, st.t, st.h, k, v0, v1);
                update_means();
            }
            if (st.record_index != npos) record(sample_times[st.record_index]);
        }
        return out;
    }

    // Parallel: each worker owns a contiguous block of trajectories; the barrier completion step
    // reduces the ensemble in index order, so results match the serial path bit for bit.
    std::size_t current = 0;
    auto on_step = [&]() noexcept {
        const auto& st = steps[current];
        if (st.h > 0.0) update_means();
        if (st.record_index != npos) record(sample_times[st.record_index]);
        ++current;
    };
    std::barrier sync(static_cast<std::ptrdiff_t>(threads), on_step);
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
        const std::size_t first = n * w / threads, last = n * (w + 1) / threads;
        pool.emplace_back([&, first, last]() {
            for (std::size_t k = 0; k < steps.size(); ++k) {
                const auto& st = steps[k];
                if (st.h > 0.0) {
                    const auto [v0, v1] = variances(st.h);
                    advance(first, last, st.t, st.h, k, v0, v1);
                }
                sync.arrive_and_wait();
            }
        });
    }
    pool.clear();
    return out;
}

std::array<cplx, 3> damped_eigen(double cumulative_rabi, double gamma) {
    if (cumulative_rabi < 0.0 || gamma < 0.0) throw ValidationError("damped_eigen: arguments must be >= 0");
    const double disc = cumulative_rabi * cumulative_rabi - gamma * gamma / 16.0;
    const double g4 = 0.25 * gamma;
    if (disc >= 0.0) {
        const double w = std::sqrt(disc);
        return {cplx(0.0), cplx(g4, w), cplx(g4, -w)};
    }
    const double s = std::sqrt(-disc);
    return {cplx(0.0), cplx(g4 + s, 0.0), cplx(g4 - s, 0.0)};
}

double steady_state_quanta(const TrimodeState& init, const ReducedSystem& rs) {
    if (rs.r_bm == cplx(0.0)) throw ValidationError("steady_state_quanta needs R_bm != 0");
    if (std::abs(init.norm() - 1.0) > 1e-12) throw ValidationError("initial state not normalized");
    const double field = std::norm(init.c100) + std::norm(init.c010);
    if (field == 0.0) throw ValidationError("initial state has no field quanta; N_q is undefined");
    // Projection onto the dark state (0, R_bm, -R_a0) / Omega; equals |A|^2 (1 + |R_a0/R_bm|^2).
    const double s = rs.cumulative_rabi;
    const cplx proj = (std::conj(rs.r_bm) * init.c100 - std::conj(rs.r_a0) * init.c010) / s;
    return std::norm(proj) / field;
}

}  // namespace tvcqed
