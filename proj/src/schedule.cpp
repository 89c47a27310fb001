#include "tvcqed/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tvcqed/errors.hpp"
#include "tvcqed/numerics/bessel.hpp"

namespace tvcqed {

struct ModulationSchedule::PiecewiseData {
    std::vector<double> breaks;
    std::vector<ModulationSchedule> pieces;
    std::vector<double> cumulative;  // integral from breaks[0] to breaks[i]
    std::optional<double> end;
};

ModulationSchedule ModulationSchedule::constant(double value) {
    if (!std::isfinite(value)) throw ValidationError("constant schedule value must be finite");
    ModulationSchedule s;
    s.kind_ = Kind::constant;
    s.a_ = value;
    return s;
}

ModulationSchedule ModulationSchedule::sinusoidal(double mean, double depth, double mod_frequency,
                                                  double phase) {
    if (!std::isfinite(mean) || !std::isfinite(depth) || !std::isfinite(phase)) {
        throw ValidationError("sinusoidal schedule parameters must be finite");
    }
    if (depth < 0.0) throw ValidationError("sinusoidal schedule depth must be >= 0");
    if (!(mod_frequency > 0.0) || !std::isfinite(mod_frequency)) {
        throw ValidationError("sinusoidal schedule mod_frequency must be > 0");
    }
    ModulationSchedule s;
    s.kind_ = Kind::sinusoidal;
    s.a_ = mean;
    s.b_ = depth;
    s.c_ = mod_frequency;
    s.d_ = phase;
    return s;
}

ModulationSchedule ModulationSchedule::linear_sweep(double rate, double offset) {
    if (!std::isfinite(rate) || !std::isfinite(offset)) {
        throw ValidationError("linear_sweep parameters must be finite");
    }
    ModulationSchedule s;
    s.kind_ = Kind::linear_sweep;
    s.a_ = rate;
    s.b_ = offset;
    return s;
}

ModulationSchedule ModulationSchedule::piecewise(std::vector<std::pair<double, ModulationSchedule>> pieces,
                                                 std::optional<double> end) {
    if (pieces.empty()) throw ValidationError("piecewise schedule needs at least one piece");
    auto data = std::make_shared<PiecewiseData>();
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const double t = pieces[i].first;
        if (!std::isfinite(t)) throw ValidationError("piecewise break times must be finite");
        if (i > 0 && !(t > pieces[i - 1].first)) {
            throw ValidationError("piecewise break times must be strictly increasing");
        }
        data->breaks.push_back(t);
        data->pieces.push_back(std::move(pieces[i].second));
    }
    if (end && !(*end > data->breaks.back())) {
        throw ValidationError("piecewise end must follow the last break");
    }
    data->end = end;
    data->cumulative.assign(data->breaks.size(), 0.0);
    for (std::size_t i = 1; i < data->breaks.size(); ++i) {
        data->cumulative[i] = data->cumulative[i - 1] +
                              data->pieces[i - 1].phase_integral(data->breaks[i - 1], data->breaks[i]);
    }
    ModulationSchedule s;
    s.kind_ = Kind::piecewise;
    s.pieces_ = std::move(data);
    return s;
}

std::pair<double, double> ModulationSchedule::domain() const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (kind_ != Kind::piecewise) return {-inf, inf};
    return {pieces_->breaks.front(), pieces_->end.value_or(inf)};
}

void ModulationSchedule::check_domain(double t) const {
    if (std::isnan(t)) throw DomainError("schedule evaluated at NaN time");
    if (kind_ != Kind::piecewise) return;
    const auto [lo, hi] = domain();
    if (t < lo || t > hi) {
        std::ostringstream msg;
        msg << "t=" << t << " outside piecewise schedule domain [" << lo << ", " << hi << "]";
        throw DomainError(msg.str());
    }
}

double ModulationSchedule::operator()(double t) const {
    check_domain(t);
    switch (kind_) {
        case Kind::constant:
            return a_;
        case Kind::sinusoidal:
            return a_ - b_ * std::sin(c_ * t + d_);
        case Kind::linear_sweep:
            return a_ * t + b_;
        case Kind::piecewise: {
            const auto& br = pieces_->breaks;
            const auto idx = static_cast<std::size_t>(std::upper_bound(br.begin(), br.end(), t) - br.begin()) - 1;
            return pieces_->pieces[idx](t);
        }
    }
    return 0.0;
}

// Piecewise only: integral from breaks[0] to t.
double ModulationSchedule::primitive(double t) const {
    const auto& br = pieces_->breaks;
    const auto idx = static_cast<std::size_t>(std::upper_bound(br.begin(), br.end(), t) - br.begin()) - 1;
    return pieces_->cumulative[idx] + pieces_->pieces[idx].phase_integral(br[idx], t);
}

double ModulationSchedule::phase_integral(double t0, double t1) const {
    check_domain(t0);
    check_domain(t1);
    const double dt = t1 - t0;
    switch (kind_) {
        case Kind::constant:
            return a_ * dt;
        case Kind::sinusoidal: {
            // cos(x1) - cos(x0) written as a product to avoid cancellation for short intervals.
            const double mid = 0.5 * c_ * (t0 + t1) + d_;
            const double dcos = -2.0 * std::sin(mid) * std::sin(0.5 * c_ * dt);
            return a_ * dt + (b_ / c_) * dcos;
        }
        case Kind::linear_sweep:
            return dt * (0.5 * a_ * (t0 + t1) + b_);
        case Kind::piecewise: {
            const auto& br = pieces_->breaks;
            const auto i0 = std::upper_bound(br.begin(), br.end(), t0) - br.begin();
            const auto i1 = std::upper_bound(br.begin(), br.end(), t1) - br.begin();
            if (i0 == i1) return pieces_->pieces[static_cast<std::size_t>(i0) - 1].phase_integral(t0, t1);
            return primitive(t1) - primitive(t0);
        }
    }
    return 0.0;
}

std::optional<double> ModulationSchedule::constant_value() const {
    if (kind_ == Kind::constant) return a_;
    return std::nullopt;
}

std::optional<ModulationSchedule::Sinusoidal> ModulationSchedule::sinusoidal_params() const {
    if (kind_ == Kind::sinusoidal) return Sinusoidal{a_, b_, c_, d_};
    return std::nullopt;
}

std::optional<ModulationSchedule::LinearSweep> ModulationSchedule::linear_params() const {
    if (kind_ == Kind::linear_sweep) return LinearSweep{a_, b_};
    return std::nullopt;
}

std::optional<double> ModulationSchedule::mean() const {
    if (kind_ == Kind::constant || kind_ == Kind::sinusoidal) return a_;
    return std::nullopt;
}

std::string ModulationSchedule::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::constant:
            os << "constant(" << a_ << ")";
            break;
        case Kind::sinusoidal:
            os << "sinusoidal(mean=" << a_ << ", depth=" << b_ << ", mod_frequency=" << c_
               << ", phase=" << d_ << ")";
            break;
        case Kind::linear_sweep:
            os << "linear_sweep(rate=" << a_ << ", offset=" << b_ << ")";
            break;
        case Kind::piecewise:
            os << "piecewise(" << pieces_->pieces.size() << " pieces)";
            break;
    }
    return os.str();
}

double eval_schedule(const ModulationSchedule& s, double t) { return s(t); }

double phase_integral(const ModulationSchedule& s, double t0, double t1) {
    return s.phase_integral(t0, t1);
}

cplx HarmonicAmplitudes::operator[](int n) const {
    if (n < -n_max || n > n_max) return {0.0, 0.0};
    return values[static_cast<std::size_t>(n + n_max)];
}

double HarmonicAmplitudes::sum_rule_deficit() const {
    const double base = std::norm(base_rabi);
    if (base == 0.0) return 0.0;
    double sum = 0.0;
    for (const cplx& r : values) sum += std::norm(r);
    return 1.0 - sum / base;
}

HarmonicAmplitudes harmonic_amplitudes(cplx base_rabi, double depth, double mod_frequency, int n_max) {
    if (!(mod_frequency > 0.0)) throw ValidationError("harmonic_amplitudes: mod_frequency must be > 0");
    if (n_max < 0) throw ValidationError("harmonic_amplitudes: n_max must be >= 0");
    const auto j = numerics::bessel_j_sequence(n_max, depth / mod_frequency);
    HarmonicAmplitudes out;
    out.base_rabi = base_rabi;
    out.n_max = n_max;
    out.values.resize(2 * static_cast<std::size_t>(n_max) + 1);
    const cplx minus_i(0.0, -1.0);
    cplx phase(1.0, 0.0);
    for (int n = 0; n <= n_max; ++n) {
        const cplx r = phase * base_rabi * j[n];
        out.values[static_cast<std::size_t>(n_max + n)] = r;
        out.values[static_cast<std::size_t>(n_max - n)] = r;
        phase *= minus_i;
    }
    const double deficit = out.sum_rule_deficit();
    if (deficit > 1e-10) {
        std::ostringstream msg;
        msg << "harmonic truncation n_max=" << n_max << " leaves a Bessel sum-rule deficit of "
            << deficit;
        out.warning = msg.str();
    }
    return out;
}

}  // namespace tvcqed
