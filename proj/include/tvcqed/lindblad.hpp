#pragma once

#include <Eigen/Dense>
#include <array>
#include <span>
#include <string>
#include <vector>

#include "tvcqed/numerics/ode.hpp"
#include "tvcqed/open_system.hpp"
#include "tvcqed/trimode.hpp"

namespace tvcqed {

// Truncated Fock(a) x Fock(b) x {ground, excited} basis.
class ProductBasis {
public:
    explicit ProductBasis(int n_max_a = 1, int n_max_b = 1);

    int n_max_a() const { return na_; }
    int n_max_b() const { return nb_; }
    int dimension() const { return 2 * (na_ + 1) * (nb_ + 1); }
    int index(int n_a, int n_b, int s) const;
    std::array<int, 3> state(int index) const;  // (n_a, n_b, s)

private:
    int na_;
    int nb_;
};

struct JumpOperator {
    std::string label;
    double rate;
    Eigen::MatrixXcd op;
};

// Lab-frame master equation d rho/dt = -i[H(t), rho] + sum_k rate_k (L rho L^+ - {L^+ L, rho}/2).
class Lindbladian {
public:
    Lindbladian(TrimodeParams p, const RelaxationRates& r, ProductBasis basis);

    Eigen::MatrixXcd hamiltonian(double t) const;
    Eigen::MatrixXcd dissipator(const Eigen::MatrixXcd& rho) const;
    Eigen::MatrixXcd apply(double t, const Eigen::MatrixXcd& rho) const;

    // Lambda = sum_k rate_k L^+ L / 2.
    Eigen::MatrixXcd decay_operator() const;

    const std::vector<JumpOperator>& jumps() const { return jumps_; }
    const ProductBasis& basis() const { return basis_; }
    const TrimodeParams& params() const { return params_; }

private:
    TrimodeParams params_;
    ProductBasis basis_;
    Eigen::MatrixXcd num_a_, num_b_, num_s_, coupling_;
    std::vector<JumpOperator> jumps_;
    std::vector<Eigen::MatrixXcd> jump_products_;  // L^+ L
};

Lindbladian build_lindbladian(const TrimodeParams& p, const RelaxationRates& r, const ProductBasis& basis);

struct DensitySeries {
    std::vector<double> times;
    std::vector<Eigen::MatrixXcd> states;
    numerics::IntegrationStats stats;
};

DensitySeries integrate_master(const Lindbladian& l, const Eigen::MatrixXcd& rho0,
                               std::span<const double> sample_times,
                               const numerics::IntegratorConfig& cfg = {});

// H(t) - i Lambda.
Eigen::MatrixXcd effective_hamiltonian(const TrimodeParams& p, const RelaxationRates& r,
                                       const ProductBasis& basis, double t = 0.0);

// Removes the free evolution: rho_G = U0^+ rho U0 with the phases of the rotating frame.
Eigen::MatrixXcd to_interaction_frame(const TrimodeParams& p, const ProductBasis& basis,
                                      const Eigen::MatrixXcd& rho, double t);

// (000, 001, 100, 010) sub-block, and the inverse embedding.
Eigen::Matrix4cd single_excitation_block(const ProductBasis& basis, const Eigen::MatrixXcd& rho);
Eigen::MatrixXcd embed_single_excitation(const ProductBasis& basis, const Eigen::Matrix4cd& m);

}  // namespace tvcqed
