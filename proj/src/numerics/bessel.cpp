#include "tvcqed/numerics/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tvcqed/errors.hpp"

namespace tvcqed::numerics {
namespace {

constexpr double kSeriesLimit = 12.0;

void check_domain(int n, double x) {
    if (n < 0) {
        throw DomainError("bessel_j: negative order " + std::to_string(n));
    }
    if (!std::isfinite(x) || std::abs(x) > kBesselMaxArgument) {
        throw DomainError("bessel_j: |x| = " + std::to_string(std::abs(x)) +
                          " outside the supported range [0, 50]");
    }
}

// Ascending series; x >= 0. Terms reach ~1e4 near x = 12, so the sum is carried in extended
// precision to keep the cancellation error below 1e-13.
double series(int n, double x) {
    const long double h = 0.5L * x;
    long double term = 1.0L;
    for (int i = 1; i <= n; ++i) {
        term *= h / i;
        if (term == 0.0L) return 0.0;
    }
    const long double h2 = h * h;
    long double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= -h2 / (static_cast<long double>(k) * static_cast<long double>(n + k));
        sum += term;
        if (std::abs(term) <= 1e-20L * std::abs(sum)) break;
    }
    return static_cast<double>(sum);
}

// Miller's downward recurrence normalised by J_0 + 2 sum J_2k = 1; x > 0.
std::vector<double> miller(int n_max, double x) {
    const int top = 2 * ((std::max(n_max, static_cast<int>(x)) + 30 +
                          static_cast<int>(std::sqrt(40.0 * std::max(n_max, static_cast<int>(x))))) /
                         2);
    std::vector<double> j(static_cast<std::size_t>(top) + 2, 0.0);
    j[top + 1] = 0.0;
    j[top] = 1e-300;
    double norm = 0.0;
    for (int k = top; k >= 1; --k) {
        j[k - 1] = (2.0 * k / x) * j[k] - j[k + 1];
        if (std::abs(j[k - 1]) > 1e250) {
            for (int i = k - 1; i <= top; ++i) j[i] *= 1e-250;
            norm *= 1e-250;
        }
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j[k - 1];
    }
    norm += j[0];
    j.resize(static_cast<std::size_t>(n_max) + 1);
    for (double& v : j) v /= norm;
    return j;
}

}  // namespace

std::vector<double> bessel_j_sequence(int n_max, double x) {
    check_domain(n_max, x);
    const double ax = std::abs(x);
    std::vector<double> out;
    if (ax < kSeriesLimit) {
        out.resize(static_cast<std::size_t>(n_max) + 1);
        for (int n = 0; n <= n_max; ++n) out[n] = series(n, ax);
    } else {
        out = miller(n_max, ax);
    }
    if (x < 0.0) {
        for (int n = 1; n <= n_max; n += 2) out[n] = -out[n];
    }
    return out;
}

double bessel_j(int n, double x) {
    check_domain(n, x);
    const double ax = std::abs(x);
    double v = ax < kSeriesLimit ? series(n, ax) : miller(n, ax)[n];
    return (x < 0.0 && n % 2 == 1) ? -v : v;
}

}  // namespace tvcqed::numerics
