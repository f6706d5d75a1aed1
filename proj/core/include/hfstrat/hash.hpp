#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace hfstrat {

/// FNV-1a 64-bit over bytes; used for schema hashes and manifest content
/// hashes. Not cryptographic.
constexpr std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string to_hex(std::uint64_t v);

}  // namespace hfstrat
