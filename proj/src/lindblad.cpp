#include "tvcqed/lindblad.hpp"

#include <cmath>
#include <sstream>

#include "tvcqed/errors.hpp"

namespace tvcqed {

ProductBasis::ProductBasis(int n_max_a, int n_max_b) : na_(n_max_a), nb_(n_max_b) {
    if (n_max_a < 1 || n_max_b < 1) {
        throw ValidationError("product basis needs n_max >= 1 per mode to hold the single-excitation manifold");
    }
}

int ProductBasis::index(int n_a, int n_b, int s) const {
    if (n_a < 0 || n_a > na_ || n_b < 0 || n_b > nb_ || (s != 0 && s != 1)) {
        throw DomainError("product basis label out of range");
    }
    return (n_a * (nb_ + 1) + n_b) * 2 + s;
}

std::array<int, 3> ProductBasis::state(int idx) const {
    if (idx < 0 || idx >= dimension()) throw DomainError("product basis index out of range");
    const int s = idx % 2;
    const int rest = idx / 2;
    return {rest / (nb_ + 1), rest % (nb_ + 1), s};
}

Lindbladian::Lindbladian(TrimodeParams p, const RelaxationRates& r, ProductBasis basis)
    : params_(std::move(p)), basis_(basis) {
    r.validate();
    const int d = basis_.dimension();
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d), b = a, sigma = a;
    for (int i = 0; i < d; ++i) {
        const auto [na, nb, s] = basis_.state(i);
        if (na > 0) a(basis_.index(na - 1, nb, s), i) = std::sqrt(static_cast<double>(na));
        if (nb > 0) b(basis_.index(na, nb - 1, s), i) = std::sqrt(static_cast<double>(nb));
        if (s == 1) sigma(basis_.index(na, nb, 0), i) = 1.0;
    }
    num_a_ = a.adjoint() * a;
    num_b_ = b.adjoint() * b;
    num_s_ = sigma.adjoint() * sigma;
    const Eigen::MatrixXcd up = sigma.adjoint() * (params_.rabi_a * a + params_.rabi_b * b);
    coupling_ = -(up + up.adjoint());

    const auto th = thermal_factors(r, reservoir_frequencies(params_));
    auto add = [&](const char* label, double rate, const Eigen::MatrixXcd& op) {
        if (rate > 0.0) jumps_.push_back({label, rate, op});
    };
    add("sigma", r.gamma * th.n0, sigma);
    add("sigma_dag", r.gamma * th.n1, sigma.adjoint());
    add("a", r.mu_a * (th.nbar_a + 1.0), a);
    add("a_dag", r.mu_a * th.nbar_a, a.adjoint());
    add("b", r.mu_b * (th.nbar_b + 1.0), b);
    add("b_dag", r.mu_b * th.nbar_b, b.adjoint());
    add("dephasing", 2.0 * r.gamma_el, num_s_);
    for (const auto& j : jumps_) jump_products_.push_back(j.op.adjoint() * j.op);
}

Eigen::MatrixXcd Lindbladian::hamiltonian(double t) const {
    const int d = basis_.dimension();
    const Eigen::MatrixXcd half = 0.5 * Eigen::MatrixXcd::Identity(d, d);
    return params_.omega_a(t) * (num_a_ + half) + params_.omega_b(t) * (num_b_ + half) +
           params_.transition(t) * num_s_ + coupling_;
}

Eigen::MatrixXcd Lindbladian::dissipator(const Eigen::MatrixXcd& rho) const {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
    for (std::size_t k = 0; k < jumps_.size(); ++k) {
        const auto& j = jumps_[k];
        const auto& ll = jump_products_[k];
        out += j.rate * (j.op * rho * j.op.adjoint() - 0.5 * (ll * rho + rho * ll));
    }
    return out;
}

Eigen::MatrixXcd Lindbladian::apply(double t, const Eigen::MatrixXcd& rho) const {
    const Eigen::MatrixXcd h = hamiltonian(t);
    return cplx(0.0, -1.0) * (h * rho - rho * h) + dissipator(rho);
}

Eigen::MatrixXcd Lindbladian::decay_operator() const {
    const int d = basis_.dimension();
    Eigen::MatrixXcd lam = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t k = 0; k < jumps_.size(); ++k) lam += 0.5 * jumps_[k].rate * jump_products_[k];
    return lam;
}

Lindbladian build_lindbladian(const TrimodeParams& p, const RelaxationRates& r, const ProductBasis& basis) {
    return Lindbladian(p, r, basis);
}

DensitySeries integrate_master(const Lindbladian& l, const Eigen::MatrixXcd& rho0,
                               std::span<const double> sample_times, const numerics::IntegratorConfig& cfg) {
    const int d = l.basis().dimension();
    if (rho0.rows() != d || rho0.cols() != d) throw ValidationError("initial density matrix has wrong dimension");
    if ((rho0 - rho0.adjoint()).norm() > 1e-10) throw ValidationError("initial density matrix is not Hermitian");
    if (std::abs(rho0.trace().real() - 1.0) > 1e-10) throw ValidationError("initial density matrix trace != 1");
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho0, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-10) throw ValidationError("initial density matrix is not PSD");
    }

    using Map = Eigen::Map<const Eigen::MatrixXcd>;
    using MutMap = Eigen::Map<Eigen::MatrixXcd>;
    auto rhs = [&](double t, std::span<const cplx> y, std::span<cplx> dy) {
        MutMap(dy.data(), d, d) = l.apply(t, Map(y.data(), d, d));
    };
    std::vector<cplx> y0(static_cast<std::size_t>(d) * d);
    MutMap(y0.data(), d, d) = rho0;

    DensitySeries out;
    out.stats = numerics::integrate_complex_ode(
        rhs, y0, sample_times, cfg, [&](std::size_t, double t, std::span<const cplx> y) {
            const Eigen::MatrixXcd rho = Map(y.data(), d, d);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
            if (es.eigenvalues().minCoeff() < -1e-8) {
                std::ostringstream msg;
                msg << "density matrix lost positivity (min eigenvalue " << es.eigenvalues().minCoeff() << ")";
                throw NumericalError(msg.str(), t);
            }
            out.times.push_back(t);
            out.states.push_back(rho);
        });
    return out;
}

Eigen::MatrixXcd effective_hamiltonian(const TrimodeParams& p, const RelaxationRates& r,
                                       const ProductBasis& basis, double t) {
    const Lindbladian l(p, r, basis);
    return l.hamiltonian(t) - cplx(0.0, 1.0) * l.decay_operator();
}

Eigen::MatrixXcd to_interaction_frame(const TrimodeParams& p, const ProductBasis& basis,
                                      const Eigen::MatrixXcd& rho, double t) {
    const double pa = p.omega_a.phase_integral(0.0, t);
    const double pb = p.omega_b.phase_integral(0.0, t);
    const double pw = p.transition.phase_integral(0.0, t);
    const int d = basis.dimension();
    std::vector<double> theta(d);
    for (int i = 0; i < d; ++i) {
        const auto [na, nb, s] = basis.state(i);
        theta[i] = (na + 0.5) * pa + (nb + 0.5) * pb + s * pw;
    }
    Eigen::MatrixXcd out(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) out(i, j) = rho(i, j) * std::polar(1.0, theta[i] - theta[j]);
    }
    return out;
}

namespace {

std::array<int, 4> manifold_indices(const ProductBasis& basis) {
    return {basis.index(0, 0, 0), basis.index(0, 0, 1), basis.index(1, 0, 0), basis.index(0, 1, 0)};
}

}  // namespace

Eigen::Matrix4cd single_excitation_block(const ProductBasis& basis, const Eigen::MatrixXcd& rho) {
    const auto idx = manifold_indices(basis);
    Eigen::Matrix4cd m;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) m(a, b) = rho(idx[a], idx[b]);
    }
    return m;
}

Eigen::MatrixXcd embed_single_excitation(const ProductBasis& basis, const Eigen::Matrix4cd& m) {
    const auto idx = manifold_indices(basis);
    const int d = basis.dimension();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) rho(idx[a], idx[b]) = m(a, b);
    }
    return rho;
}

}  // namespace tvcqed
