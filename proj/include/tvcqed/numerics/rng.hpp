#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace tvcqed::numerics {

// Philox4x32-10 (Salmon et al. 2011). Stateless: the output is a pure function of key and counter,
// so streams keyed by (seed, stream, step) do not depend on evaluation order.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    explicit Philox4x32(std::uint64_t seed);

    Counter operator()(Counter ctr) const;

private:
    Key key_;
};

// Independent standard normal samples for (stream, step). Each call consumes one Philox block.
std::array<double, 2> gaussian_pair(const Philox4x32& gen, std::uint64_t stream, std::uint64_t step,
                                    std::uint32_t lane = 0);

// Complex Gaussian with E|z|^2 = 1.
std::complex<double> complex_gaussian(const Philox4x32& gen, std::uint64_t stream,
                                      std::uint64_t step, std::uint32_t lane = 0);

}  // namespace tvcqed::numerics
