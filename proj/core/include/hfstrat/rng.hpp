#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace hfstrat {

/// Identifies a reproducible random stream. Identical (seed, stream_id)
/// pairs produce identical sequences on every platform; distinct stream_ids
/// give independent sequences, so parallel consumers each take their own.
struct RngHandle {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    RngHandle with_stream(std::uint64_t stream) const { return {seed, stream}; }
};

/// Splitmix-style counter generator. Pure 64-bit integer arithmetic, so the
/// sequence is bit-identical across compilers and platforms; golden vectors
/// are frozen in the test suite.
class RngStream {
public:
    explicit RngStream(RngHandle h)
        : state_(scramble(h.seed) ^ scramble(scramble(h.stream_id) + kGamma)) {}

    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : RngStream(RngHandle{seed, stream_id}) {}

    std::uint64_t next_u64() {
        state_ += kGamma;
        return scramble(state_);
    }

    /// Uniform draw in [0, 1) with 53 bits of precision.
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t next_below(std::uint64_t n) {
        using u128 = unsigned __int128;
        return static_cast<std::uint64_t>((static_cast<u128>(next_u64()) * n) >> 64);
    }

    /// Standard normal draw (Box-Muller; consumes two uniforms).
    double next_gaussian();

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// n indices drawn with replacement from [0, n).
    std::vector<std::size_t> bootstrap_indices(std::size_t n);

    static std::uint64_t scramble(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
    std::uint64_t state_;
};

/// Well-separated sub-seed for a tagged purpose (grid searches, fold plans,
/// generators) so nested consumers never share a stream by accident.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return RngStream(seed, tag).next_u64();
}

}  // namespace hfstrat
