#pragma once

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <string>

namespace mkperc {

// FNV-1a, 64-bit. Used for event-stream digests, state digests and the
// run-manifest file hashes.
class Fnv1a64 {
public:
    static constexpr std::uint64_t kOffset = 14695981039346656037ull;
    static constexpr std::uint64_t kPrime = 1099511628211ull;

    void update(const void* data, std::size_t len) {
        const auto* p = static_cast<const std::uint8_t*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h_ ^= p[i];
            h_ *= kPrime;
        }
    }

    void update_u32(std::uint32_t v) { update(&v, sizeof(v)); }
    void update_u64(std::uint64_t v) { update(&v, sizeof(v)); }
    void update_f64(double v) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(v));
        std::memcpy(&bits, &v, sizeof(v));
        update_u64(bits);
    }

    std::uint64_t digest() const { return h_; }

    std::string hex() const {
        static const char* k = "0123456789abcdef";
        std::string out(16, '0');
        std::uint64_t v = h_;
        for (int i = 15; i >= 0; --i) {
            out[static_cast<std::size_t>(i)] = k[v & 0xf];
            v >>= 4;
        }
        return out;
    }

private:
    std::uint64_t h_ = kOffset;
};

}  // namespace mkperc
