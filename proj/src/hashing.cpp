#include "hashing.hpp"

#include <fstream>

#include "errors.hpp"

namespace fincorpus {

std::uint64_t hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open file for digest: " + path);
    constexpr std::uint64_t kMul = 0x9e3779b97f4a7c15ULL;
    std::uint64_t h = 0x5195f1a3bd3c5c9bULL;
    std::uint64_t total = 0;
    char buf[65536];
    while (in) {
        in.read(buf, sizeof(buf));
        const auto n = static_cast<std::size_t>(in.gcount());
        if (n == 0) break;
        total += n;
        std::size_t i = 0;
        while (i + 8 <= n) {
            std::uint64_t chunk;
            std::memcpy(&chunk, buf + i, 8);
            h = mix64(h ^ chunk) * kMul;
            i += 8;
        }
        std::uint64_t tail = 0;
        int shift = 0;
        for (; i < n; ++i, shift += 8) {
            tail |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i])) << shift;
        }
        if (shift != 0) h = mix64(h ^ tail) * kMul;
    }
    return mix64(h ^ total);
}

}  // namespace fincorpus
