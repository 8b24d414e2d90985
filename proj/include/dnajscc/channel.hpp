#ifndef DNAJSCC_CHANNEL_HPP
#define DNAJSCC_CHANNEL_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "dnajscc/common.hpp"
#include "dnajscc/model.hpp"

namespace dnajscc {

// Synthesis/PCR/sequencing modeled as an insertion-deletion-substitution
// channel over strands. The total per-nucleotide error probability gamma is
// split into fixed shares: insertion 0.17, deletion 0.40, substitution 0.43.
struct ChannelConfig {
    double gamma = 0.005;
    int v = 2;
    int s = 256;
    std::uint64_t seed = 1;

    static constexpr double kInsertionShare = 0.17;
    static constexpr double kDeletionShare = 0.40;
    static constexpr double kSubstitutionShare = 0.43;

    void validate() const {
        if (gamma < 0.0 || gamma >= 1.0)
            throw std::invalid_argument("ChannelConfig: gamma must be in [0,1)");
        if (v < 1) throw std::invalid_argument("ChannelConfig: v must be >= 1");
        if (s < 1) throw std::invalid_argument("ChannelConfig: strand length s must be >= 1");
    }
};

struct StrandOrigin {
    std::uint64_t sequence_id = 0;
    std::uint32_t strand_index = 0;
    std::uint32_t copy_index = 0;
};

struct Strand {
    NucleotideSequence bases;
    StrandOrigin origin;
};

struct ChannelCounts {
    std::uint64_t input = 0;
    std::uint64_t output = 0;
    std::uint64_t insertions = 0;
    std::uint64_t deletions = 0;
    std::uint64_t substitutions = 0;

    void operator+=(const ChannelCounts& o) {
        input += o.input;
        output += o.output;
        insertions += o.insertions;
        deletions += o.deletions;
        substitutions += o.substitutions;
    }
};

// One realized channel outcome. Each output slot either forwards the input
// position `src` untouched, or carries a literal base from an insertion or
// substitution event (src = -1). Gradients flow only through forwarded slots.
struct SlotRef {
    std::int32_t src = -1;
    Base literal = 0;
};

struct IdsPattern {
    std::vector<SlotRef> slots;
    ChannelCounts counts;
};

namespace detail {
inline constexpr std::uint64_t kChannelTag = 0xD4AC;
inline constexpr std::uint64_t kPassInsert = 1, kPassDelete = 2, kPassSubstitute = 3;
} // namespace detail

// Samples insertion, deletion and substitution passes in sequence, composing
// on the intermediate result so inserted bases can themselves be deleted or
// substituted later. Each pass draws from its own derived sub-stream.
inline IdsPattern sample_ids_pattern(const NucleotideSequence& bases, double gamma,
                                     std::uint64_t stream_key) {
    IdsPattern pat;
    pat.counts.input = bases.size();
    pat.slots.reserve(bases.size() + 4);

    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // Insertion: with probability 0.17*gamma, one uniformly random base lands
    // immediately before the current position; at most one per position.
    {
        auto rng = make_rng(derive_key(stream_key, {detail::kPassInsert}));
        std::uniform_int_distribution<int> any_base(0, 3);
        const double p = ChannelConfig::kInsertionShare * gamma;
        for (std::size_t i = 0; i < bases.size(); ++i) {
            if (p > 0.0 && unit(rng) < p) {
                pat.slots.push_back({-1, static_cast<Base>(any_base(rng))});
                ++pat.counts.insertions;
            }
            pat.slots.push_back({static_cast<std::int32_t>(i), 0});
        }
    }

    // Deletion over the intermediate sequence.
    {
        auto rng = make_rng(derive_key(stream_key, {detail::kPassDelete}));
        const double p = ChannelConfig::kDeletionShare * gamma;
        if (p > 0.0) {
            std::vector<SlotRef> kept;
            kept.reserve(pat.slots.size());
            for (const SlotRef& slot : pat.slots) {
                if (unit(rng) < p) {
                    ++pat.counts.deletions;
                } else {
                    kept.push_back(slot);
                }
            }
            pat.slots.swap(kept);
        }
    }

    // Substitution replaces a base with one of the 3 differing bases.
    {
        auto rng = make_rng(derive_key(stream_key, {detail::kPassSubstitute}));
        std::uniform_int_distribution<int> offset(1, 3);
        const double p = ChannelConfig::kSubstitutionShare * gamma;
        if (p > 0.0) {
            for (SlotRef& slot : pat.slots) {
                if (unit(rng) < p) {
                    const Base orig = slot.src >= 0 ? bases[static_cast<std::size_t>(slot.src)] : slot.literal;
                    slot = {-1, static_cast<Base>((orig + offset(rng)) % 4)};
                    ++pat.counts.substitutions;
                }
            }
        }
    }

    pat.counts.output = pat.slots.size();
    return pat;
}

inline NucleotideSequence apply_pattern(const NucleotideSequence& bases, const IdsPattern& pat) {
    NucleotideSequence out;
    out.reserve(pat.slots.size());
    for (const SlotRef& slot : pat.slots)
        out.push_back(slot.src >= 0 ? bases[static_cast<std::size_t>(slot.src)] : slot.literal);
    return out;
}

inline std::uint64_t strand_stream_key(const ChannelConfig& cfg, const StrandOrigin& origin) {
    return derive_key(cfg.seed,
                      {detail::kChannelTag, origin.sequence_id, origin.copy_index, origin.strand_index});
}

// One noisy realization of a strand; deterministic in (seed, origin).
inline Strand apply_ids(const Strand& strand, const ChannelConfig& cfg,
                        ChannelCounts* counts = nullptr) {
    cfg.validate();
    IdsPattern pat = sample_ids_pattern(strand.bases, cfg.gamma, strand_stream_key(cfg, strand.origin));
    if (counts) *counts += pat.counts;
    Strand out;
    out.origin = strand.origin;
    out.bases = apply_pattern(strand.bases, pat);
    return out;
}

// Cuts z into consecutive non-overlapping strands of length s; the final
// strand is shorter when s does not divide k.
inline std::vector<Strand> segment(const NucleotideSequence& z, int s, std::uint64_t sequence_id = 0) {
    if (s <= 0) throw std::invalid_argument("segment: strand length must be positive");
    std::vector<Strand> strands;
    std::uint32_t index = 0;
    for (std::size_t pos = 0; pos < z.size(); pos += static_cast<std::size_t>(s)) {
        const std::size_t end = std::min(z.size(), pos + static_cast<std::size_t>(s));
        Strand st;
        st.bases.assign(z.begin() + pos, z.begin() + end);
        st.origin = {sequence_id, index++, 0};
        strands.push_back(std::move(st));
    }
    return strands;
}

// v independent noisy copies of the whole sequence, strand by strand.
inline std::vector<std::vector<Strand>> pcr_amplify(const NucleotideSequence& z,
                                                    const ChannelConfig& cfg,
                                                    std::uint64_t sequence_id = 0,
                                                    ChannelCounts* counts = nullptr) {
    cfg.validate();
    const std::vector<Strand> clean = segment(z, cfg.s, sequence_id);
    std::vector<std::vector<Strand>> copies(static_cast<std::size_t>(cfg.v));
    for (int j = 0; j < cfg.v; ++j) {
        copies[j].reserve(clean.size());
        for (const Strand& st : clean) {
            Strand noisy = st;
            noisy.origin.copy_index = static_cast<std::uint32_t>(j);
            noisy = apply_ids(noisy, cfg, counts);
            copies[j].push_back(std::move(noisy));
        }
    }
    return copies;
}

// Concatenates each copy's strands in origin order. Strand identity is given;
// primer/index recovery is not modeled.
inline std::vector<NucleotideSequence> recombine(const std::vector<std::vector<Strand>>& copies) {
    std::vector<NucleotideSequence> out;
    out.reserve(copies.size());
    for (const auto& strands : copies) {
        std::uint32_t max_index = 0;
        for (const Strand& st : strands) max_index = std::max(max_index, st.origin.strand_index);
        std::vector<const Strand*> ordered(strands.empty() ? 0 : max_index + 1, nullptr);
        for (const Strand& st : strands) {
            if (ordered[st.origin.strand_index])
                throw std::runtime_error("recombine: duplicate strand index " +
                                         std::to_string(st.origin.strand_index));
            ordered[st.origin.strand_index] = &st;
        }
        NucleotideSequence seq;
        for (std::size_t i = 0; i < ordered.size(); ++i) {
            if (!ordered[i])
                throw std::runtime_error("recombine: missing strand index " + std::to_string(i));
            seq.insert(seq.end(), ordered[i]->bases.begin(), ordered[i]->bases.end());
        }
        out.push_back(std::move(seq));
    }
    return out;
}

// Full-copy realization with slot sources as global indices into z. Used by
// the training loop, which needs the survivor map for backpropagation.
inline IdsPattern realize_copy(const NucleotideSequence& z, const ChannelConfig& cfg,
                               std::uint64_t key_base, std::uint32_t copy_index) {
    IdsPattern full;
    full.counts.input = z.size();
    std::uint32_t strand_index = 0;
    for (std::size_t pos = 0; pos < z.size(); pos += static_cast<std::size_t>(cfg.s)) {
        const std::size_t end = std::min(z.size(), pos + static_cast<std::size_t>(cfg.s));
        NucleotideSequence strand(z.begin() + pos, z.begin() + end);
        IdsPattern pat =
            sample_ids_pattern(strand, cfg.gamma, derive_key(key_base, {copy_index, strand_index}));
        for (SlotRef slot : pat.slots) {
            if (slot.src >= 0) slot.src += static_cast<std::int32_t>(pos);
            full.slots.push_back(slot);
        }
        full.counts.insertions += pat.counts.insertions;
        full.counts.deletions += pat.counts.deletions;
        full.counts.substitutions += pat.counts.substitutions;
        ++strand_index;
    }
    full.counts.output = full.slots.size();
    return full;
}

} // namespace dnajscc

#endif
