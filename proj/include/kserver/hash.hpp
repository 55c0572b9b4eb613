#pragma once

#include <cstdint>
#include <span>

namespace kserver {

// FNV-1a, 64-bit. Used for golden hashes of enumeration orders and value
// tables; must stay byte-identical across platforms, so integers are fed
// in as explicit little-endian bytes.
struct Fnv1a {
    static constexpr uint64_t kOffset = 1469598103934665603ull;
    static constexpr uint64_t kPrime = 1099511628211ull;

    uint64_t state = kOffset;

    void feed_byte(uint8_t b) {
        state ^= b;
        state *= kPrime;
    }

    void feed_u64(uint64_t v) {
        for (int i = 0; i < 8; ++i) feed_byte(static_cast<uint8_t>(v >> (8 * i)));
    }

    void feed_i64(int64_t v) { feed_u64(static_cast<uint64_t>(v)); }

    void feed_ints(std::span<const int> xs) {
        for (int x : xs) feed_i64(x);
    }
};

inline uint64_t hash_ints(std::span<const int> xs) {
    Fnv1a h;
    h.feed_ints(xs);
    return h.state;
}

} // namespace kserver
