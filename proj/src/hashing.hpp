#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>

namespace fincorpus {

// splitmix64 finalizer; full-avalanche mix of a 64-bit word.
inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

// Deterministic 64-bit hash over bytes (8-byte chunks, multiply-mix).
// Not cryptographic; used for shingles, band keys, and artifact digests.
inline std::uint64_t hash_bytes(std::string_view data, std::uint64_t seed = 0) {
    constexpr std::uint64_t kMul = 0x9e3779b97f4a7c15ULL;
    std::uint64_t h = seed ^ (static_cast<std::uint64_t>(data.size()) * kMul);
    std::size_t i = 0;
    while (i + 8 <= data.size()) {
        std::uint64_t chunk;
        std::memcpy(&chunk, data.data() + i, 8);
        h = mix64(h ^ chunk) * kMul;
        i += 8;
    }
    std::uint64_t tail = 0;
    int shift = 0;
    for (; i < data.size(); ++i, shift += 8) {
        tail |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[i])) << shift;
    }
    return mix64(h ^ tail);
}

inline std::uint64_t hash_words(std::span<const std::uint32_t> words, std::uint64_t seed = 0) {
    constexpr std::uint64_t kMul = 0x9e3779b97f4a7c15ULL;
    std::uint64_t h = seed ^ (static_cast<std::uint64_t>(words.size()) * kMul);
    for (std::uint32_t w : words) {
        h = mix64(h ^ w) * kMul;
    }
    return mix64(h);
}

inline std::string to_hex(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return s;
}

// Streaming digest of a file's contents; throws an I/O error if unreadable.
std::uint64_t hash_file(const std::string& path);

// Deterministic Fisher-Yates shuffle driven by splitmix64 (independent of
// the standard library's distribution implementation).
template <typename T>
void deterministic_shuffle(std::span<T> items, std::uint64_t seed) {
    std::uint64_t state = seed;
    auto next = [&state]() {
        state += 0x9e3779b97f4a7c15ULL;
        return mix64(state);
    };
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(next() % i);
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace fincorpus
