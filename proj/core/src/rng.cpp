#include "hfstrat/rng.hpp"

#include <cmath>
#include <numbers>

namespace hfstrat {

double RngStream::next_gaussian() {
    // u1 is kept away from 0 so the log stays finite.
    double u1 = next_uniform();
    double u2 = next_uniform();
    if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<std::size_t> RngStream::bootstrap_indices(std::size_t n) {
    std::vector<std::size_t> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = static_cast<std::size_t>(next_below(n));
    }
    return out;
}

}  // namespace hfstrat
