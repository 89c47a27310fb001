#include "tvcqed/numerics/rng.hpp"

#include <cmath>
#include <numbers>

namespace tvcqed::numerics {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

// 53-bit uniform in (0, 1].
inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

}  // namespace

Philox4x32::Philox4x32(std::uint64_t seed)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

Philox4x32::Counter Philox4x32::operator()(Counter c) const {
    Key k = key_;
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c[0], hi0, lo0);
        mulhilo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return c;
}

std::array<double, 2> gaussian_pair(const Philox4x32& gen, std::uint64_t stream, std::uint64_t step,
                                    std::uint32_t lane) {
    // The high half of the step shares a word with the lane; steps beyond 2^40 are not expected.
    const auto out = gen({static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                          static_cast<std::uint32_t>(step),
                          (static_cast<std::uint32_t>(step >> 32) << 8) | (lane & 0xFFu)});
    const double u1 = to_unit(out[0], out[1]);
    const double u2 = to_unit(out[2], out[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
}

std::complex<double> complex_gaussian(const Philox4x32& gen, std::uint64_t stream,
                                      std::uint64_t step, std::uint32_t lane) {
    const auto g = gaussian_pair(gen, stream, step, lane);
    return {g[0] * std::numbers::sqrt2 / 2.0, g[1] * std::numbers::sqrt2 / 2.0};
}

}  // namespace tvcqed::numerics
