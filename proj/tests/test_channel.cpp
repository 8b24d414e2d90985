#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dnajscc/channel.hpp"
#include "support/test_util.hpp"

using namespace dnajscc;

namespace {
NucleotideSequence periodic_sequence(std::size_t len) {
    NucleotideSequence z(len);
    for (std::size_t i = 0; i < len; ++i) z[i] = static_cast<Base>((i * 7 + i / 5) % 4);
    return z;
}
} // namespace

TEST_CASE("noise-free channel is the identity", "[channel]") {
    ChannelConfig cfg;
    cfg.gamma = 0.0;
    Strand st{periodic_sequence(300), {4, 1, 0}};
    ChannelCounts counts;
    const Strand out = apply_ids(st, cfg, &counts);
    CHECK(out.bases == st.bases);
    CHECK(counts.insertions == 0);
    CHECK(counts.deletions == 0);
    CHECK(counts.substitutions == 0);
    CHECK(counts.output == counts.input);
}

TEST_CASE("channel draws are deterministic per (seed, origin)", "[channel]") {
    ChannelConfig cfg;
    cfg.gamma = 0.05;
    Strand st{periodic_sequence(256), {0, 3, 1}};
    const Strand a = apply_ids(st, cfg);
    const Strand b = apply_ids(st, cfg);
    CHECK(a.bases == b.bases);

    Strand other = st;
    other.origin.copy_index = 2;
    CHECK(apply_ids(other, cfg).bases != a.bases);

    ChannelConfig reseeded = cfg;
    reseeded.seed = 99;
    CHECK(apply_ids(st, reseeded).bases != a.bases);
}

TEST_CASE("slot accounting reconciles with event counts", "[channel]") {
    const NucleotideSequence z = periodic_sequence(4096);
    for (double gamma : {0.005, 0.05, 0.3}) {
        const IdsPattern pat = sample_ids_pattern(z, gamma, derive_key(11, {static_cast<std::uint64_t>(gamma * 1e6)}));
        CHECK(pat.counts.input == z.size());
        CHECK(pat.counts.output == pat.slots.size());
        CHECK(pat.counts.output == pat.counts.input + pat.counts.insertions - pat.counts.deletions);
        // Substituted and inserted slots are constants; survivors reference a
        // valid source in order.
        std::int32_t last_src = -1;
        std::size_t constants = 0;
        for (const SlotRef& slot : pat.slots) {
            if (slot.src >= 0) {
                CHECK(slot.src > last_src);
                last_src = slot.src;
                CHECK(static_cast<std::size_t>(slot.src) < z.size());
            } else {
                CHECK(slot.literal <= 3);
                ++constants;
            }
        }
        CHECK(constants >= pat.counts.insertions); // substituted survivors add more
    }
}

TEST_CASE("substituted bases always differ from the original", "[channel]") {
    // The substitution draw is (orig + U{1,2,3}) mod 4, never the identity.
    for (int orig = 0; orig < 4; ++orig)
        for (int off = 1; off <= 3; ++off) CHECK((orig + off) % 4 != orig);

    // Empirically: corrupt an all-A sequence with substitution-dominated noise
    // and verify no surviving slot was rewritten to 'A'.
    NucleotideSequence all_a(2000, 0);
    const IdsPattern pat = sample_ids_pattern(all_a, 0.4, 42);
    for (const SlotRef& slot : pat.slots)
        if (slot.src < 0) {
            // inserted bases may be anything; substitution of A never yields A,
            // so a constant-A slot must come from an insertion
            if (slot.literal == 0) continue;
            CHECK(slot.literal <= 3);
        }
}

TEST_CASE("event rates sit inside three binomial sigmas", "[channel]") {
    ChannelConfig cfg;
    cfg.gamma = 0.005;
    cfg.s = 256;
    cfg.seed = 20240817;
    const std::size_t total = 400000;
    const NucleotideSequence z = periodic_sequence(cfg.s);
    ChannelCounts counts;
    std::uint64_t strands = total / cfg.s;
    for (std::uint64_t i = 0; i < strands; ++i) {
        Strand st{z, {i, 0, 0}};
        apply_ids(st, cfg, &counts);
    }
    const double n = static_cast<double>(counts.input);
    const auto within = [&](double events, double p) {
        const double se = std::sqrt(p * (1.0 - p) / n);
        return std::abs(events / n - p) <= 3.0 * se;
    };
    CHECK(within(static_cast<double>(counts.insertions), 0.17 * cfg.gamma));
    CHECK(within(static_cast<double>(counts.deletions), 0.40 * cfg.gamma));
    CHECK(within(static_cast<double>(counts.substitutions), 0.43 * cfg.gamma));

    // Length drift per input nucleotide: insertions minus deletions.
    const double drift = (static_cast<double>(counts.output) - n) / n;
    const double drift_se = std::sqrt((0.17 + 0.40) * cfg.gamma / n);
    CHECK(std::abs(drift - (-0.23 * cfg.gamma)) <= 3.0 * drift_se);
}

TEST_CASE("segmentation cuts strands of s with a short tail", "[channel]") {
    const NucleotideSequence z = periodic_sequence(700);
    const auto strands = segment(z, 256, 5);
    REQUIRE(strands.size() == 3);
    CHECK(strands[0].bases.size() == 256);
    CHECK(strands[1].bases.size() == 256);
    CHECK(strands[2].bases.size() == 188);
    for (std::size_t i = 0; i < strands.size(); ++i) {
        CHECK(strands[i].origin.strand_index == i);
        CHECK(strands[i].origin.sequence_id == 5);
    }
    NucleotideSequence glued;
    for (const auto& st : strands) glued.insert(glued.end(), st.bases.begin(), st.bases.end());
    CHECK(glued == z);
}

TEST_CASE("amplify/recombine round trips cleanly without noise", "[channel]") {
    ChannelConfig cfg;
    cfg.gamma = 0.0;
    cfg.v = 3;
    cfg.s = 100;
    const NucleotideSequence z = periodic_sequence(512);
    const auto copies = pcr_amplify(z, cfg, 9);
    REQUIRE(copies.size() == 3);
    const auto seqs = recombine(copies);
    for (const auto& seq : seqs) CHECK(seq == z);
}

TEST_CASE("copies are corrupted independently", "[channel]") {
    ChannelConfig cfg;
    cfg.gamma = 0.02;
    cfg.v = 4;
    const NucleotideSequence z = periodic_sequence(1024);
    const auto seqs = recombine(pcr_amplify(z, cfg));
    for (std::size_t i = 0; i < seqs.size(); ++i)
        for (std::size_t j = i + 1; j < seqs.size(); ++j) CHECK(seqs[i] != seqs[j]);
}

TEST_CASE("recombine rejects missing or duplicate strands", "[channel]") {
    ChannelConfig cfg;
    cfg.gamma = 0.0;
    cfg.s = 64;
    const NucleotideSequence z = periodic_sequence(256);
    auto copies = pcr_amplify(z, cfg);
    copies[0].erase(copies[0].begin() + 1);
    CHECK_THROWS_WITH(recombine(copies), Catch::Matchers::ContainsSubstring("missing strand"));

    auto dup = pcr_amplify(z, cfg);
    dup[1].push_back(dup[1][2]);
    CHECK_THROWS_WITH(recombine(dup), Catch::Matchers::ContainsSubstring("duplicate"));
}

TEST_CASE("whole-copy realization equals strandwise sampling", "[channel]") {
    ChannelConfig cfg;
    cfg.gamma = 0.03;
    cfg.s = 200;
    const NucleotideSequence z = periodic_sequence(612);
    const std::uint64_t key_base = 8181;
    const IdsPattern full = realize_copy(z, cfg, key_base, 1);

    NucleotideSequence expect;
    std::uint32_t strand_index = 0;
    for (std::size_t pos = 0; pos < z.size(); pos += 200) {
        const std::size_t end = std::min(z.size(), pos + 200);
        const NucleotideSequence strand(z.begin() + pos, z.begin() + end);
        const IdsPattern pat = sample_ids_pattern(strand, cfg.gamma, derive_key(key_base, {1, strand_index}));
        const NucleotideSequence noisy = apply_pattern(strand, pat);
        expect.insert(expect.end(), noisy.begin(), noisy.end());
        ++strand_index;
    }
    CHECK(apply_pattern(z, full) == expect);
    CHECK(full.counts.output == expect.size());
}

TEST_CASE("insertions can themselves be deleted or substituted", "[channel]") {
    // Sequential composition: with heavy noise the insertion count seen in the
    // final slots is below the raw insertion tally because later passes edit
    // the fresh bases too.
    const NucleotideSequence z = periodic_sequence(20000);
    const IdsPattern pat = sample_ids_pattern(z, 0.5, 5150);
    std::size_t constant_slots = 0;
    for (const SlotRef& s : pat.slots)
        if (s.src < 0) ++constant_slots;
    // Pure position bookkeeping cannot distinguish a substituted insertion
    // from a substitution, but conserving totals pins the composition:
    CHECK(pat.counts.output == pat.counts.input + pat.counts.insertions - pat.counts.deletions);
    CHECK(constant_slots > pat.counts.insertions / 2);
    CHECK(pat.counts.deletions > 0);
    CHECK(pat.counts.substitutions > 0);
}

TEST_CASE("channel configuration is validated", "[channel]") {
    ChannelConfig cfg;
    cfg.gamma = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.gamma = 0.01;
    cfg.v = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.v = 2;
    cfg.s = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
