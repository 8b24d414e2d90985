#ifndef DNAJSCC_COMMON_HPP
#define DNAJSCC_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <string>

namespace dnajscc {

// Quaternary alphabet: 0=A, 1=C, 2=G, 3=T.
inline constexpr char kBaseChars[4] = {'A', 'C', 'G', 'T'};

inline char base_to_char(std::uint8_t b) {
    if (b > 3) throw std::invalid_argument("base_to_char: value " + std::to_string(b) + " outside {0..3}");
    return kBaseChars[b];
}

inline std::uint8_t char_to_base(char c) {
    switch (c) {
        case 'A': case 'a': return 0;
        case 'C': case 'c': return 1;
        case 'G': case 'g': return 2;
        case 'T': case 't': return 3;
        default:
            throw std::invalid_argument(std::string("char_to_base: invalid nucleotide '") + c + "'");
    }
}

// Round half away from zero. All quantities rounded in this codebase are
// non-negative, but keep the symmetric rule anyway.
inline double round_half_away(double x) { return std::round(x); }

inline double sigmoid(double x) {
    return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

// --- deterministic RNG sub-streams -----------------------------------------
//
// One master seed; every stochastic site derives its own stream key from the
// seed plus an integer path (e.g. {sequence, copy, strand, pass}). splitmix64
// mixing keeps distinct paths statistically independent.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_key(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t k = splitmix64(seed ^ 0xd1b54a32d192ed03ULL);
    for (std::uint64_t p : path) k = splitmix64(k ^ splitmix64(p));
    return k;
}

inline std::mt19937_64 make_rng(std::uint64_t key) { return std::mt19937_64(key); }

} // namespace dnajscc

#endif
