#pragma once

#include <vector>

namespace tvcqed::numerics {

// Largest |x| accepted by the Bessel routines.
inline constexpr double kBesselMaxArgument = 50.0;

// Integer-order Bessel function of the first kind. Throws DomainError for n < 0 or |x| > 50.
double bessel_j(int n, double x);

// J_0(x) ... J_{n_max}(x) in one pass.
std::vector<double> bessel_j_sequence(int n_max, double x);

}  // namespace tvcqed::numerics
