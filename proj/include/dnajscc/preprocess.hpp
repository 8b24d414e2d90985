#ifndef DNAJSCC_PREPROCESS_HPP
#define DNAJSCC_PREPROCESS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dnajscc/model.hpp"
#include "dnajscc/tensor.hpp"

namespace dnajscc {

// Indel noise leaves the v copies with slightly different lengths, but the
// decoder wants a fixed-size input. Every copy is padded (or truncated) to a
// common length K with the placeholder symbol Q, then remapped so the symbol
// alphabet becomes {Q,A,C,G,T} -> {0,1,2,3,4}.
inline constexpr std::uint8_t kPadSymbol = 0;

inline int compute_K(int k) {
    if (k < 1) throw std::invalid_argument("compute_K: sequence length must be positive");
    return k + 2;
}

struct ReceivedBundle {
    int v = 0;
    int K = 0;
    std::vector<std::uint8_t> data; // v rows of K symbols in {0..4}, row-major

    std::uint8_t at(int copy, int pos) const {
        return data[static_cast<std::size_t>(copy) * static_cast<std::size_t>(K) +
                    static_cast<std::size_t>(pos)];
    }
};

inline ReceivedBundle pad_and_map(const std::vector<NucleotideSequence>& copies, int K) {
    if (K < 1) throw std::invalid_argument("pad_and_map: K must be positive");
    ReceivedBundle bundle;
    bundle.v = static_cast<int>(copies.size());
    bundle.K = K;
    bundle.data.assign(static_cast<std::size_t>(bundle.v) * static_cast<std::size_t>(K), kPadSymbol);
    for (int j = 0; j < bundle.v; ++j) {
        const NucleotideSequence& seq = copies[static_cast<std::size_t>(j)];
        const std::size_t n = std::min(seq.size(), static_cast<std::size_t>(K));
        for (std::size_t t = 0; t < n; ++t) {
            if (seq[t] > 3)
                throw std::invalid_argument("pad_and_map: base value " + std::to_string(seq[t]) +
                                            " outside {0,1,2,3}");
            bundle.data[static_cast<std::size_t>(j) * static_cast<std::size_t>(K) + t] =
                static_cast<std::uint8_t>(seq[t] + 1);
        }
    }
    return bundle;
}

// Inverse of pad_and_map for one copy: strips trailing padding and undoes the
// +1 shift. Exact only when the copy fit within K, which holds for clean
// channel-free round trips.
inline NucleotideSequence unpad_copy(const ReceivedBundle& bundle, int copy) {
    if (copy < 0 || copy >= bundle.v)
        throw std::invalid_argument("unpad_copy: copy index out of range");
    int len = bundle.K;
    while (len > 0 && bundle.at(copy, len - 1) == kPadSymbol) --len;
    NucleotideSequence seq;
    seq.reserve(static_cast<std::size_t>(len));
    for (int t = 0; t < len; ++t) {
        const std::uint8_t sym = bundle.at(copy, t);
        if (sym == kPadSymbol)
            throw std::runtime_error("unpad_copy: interior padding symbol at position " +
                                     std::to_string(t));
        seq.push_back(static_cast<Base>(sym - 1));
    }
    return seq;
}

// Batches bundles into the decoder's input layout (N, v, K), scaled to [0,1]
// by dividing the symbol values by 4.
inline Tensor bundle_batch_tensor(const std::vector<const ReceivedBundle*>& bundles) {
    if (bundles.empty()) throw std::invalid_argument("bundle_batch_tensor: empty batch");
    const int v = bundles[0]->v;
    const int K = bundles[0]->K;
    Tensor x({static_cast<int>(bundles.size()), v, K});
    std::size_t idx = 0;
    for (const ReceivedBundle* b : bundles) {
        if (b->v != v || b->K != K)
            throw std::invalid_argument("bundle_batch_tensor: mismatched bundle shapes in batch");
        for (std::uint8_t sym : b->data) x.data[idx++] = static_cast<double>(sym) / 4.0;
    }
    return x;
}

} // namespace dnajscc

#endif
