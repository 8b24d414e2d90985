#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "dnajscc/bio.hpp"
#include "support/test_util.hpp"

using namespace dnajscc;
using testsupport::StringBioOracle;

namespace {
NucleotideSequence from_letters(const std::string& s) {
    NucleotideSequence z;
    for (char ch : s) z.push_back(char_to_base(ch));
    return z;
}
} // namespace

TEST_CASE("worked example: AAAAAAGATGTG", "[bio]") {
    const auto z = from_letters("AAAAAAGATGTG");
    CHECK(gc_content(z) == Catch::Approx(0.25));
    const RunStats st = run_stats(z);
    CHECK(st.longest == 6);
    CHECK(st.frac_in_runs_longer_than(5) == Catch::Approx(0.5));
    CHECK(st.gc_fraction() == Catch::Approx(0.25));
}

TEST_CASE("statistics agree with an independent oracle on all two-letter sequences", "[bio]") {
    // Every sequence over every ordered pair of distinct bases, lengths 1..10.
    for (int b1 = 0; b1 < 4; ++b1) {
        for (int b2 = 0; b2 < 4; ++b2) {
            if (b1 == b2) continue;
            for (int len = 1; len <= 10; ++len) {
                for (std::uint32_t mask = 0; mask < (1u << len); ++mask) {
                    NucleotideSequence z(static_cast<std::size_t>(len));
                    for (int i = 0; i < len; ++i)
                        z[static_cast<std::size_t>(i)] =
                            static_cast<Base>((mask >> i) & 1 ? b2 : b1);
                    const StringBioOracle oracle(testsupport::bases_to_string(z));
                    const RunStats st = run_stats(z);
                    REQUIRE(gc_content(z) == Catch::Approx(oracle.gc).margin(1e-12));
                    REQUIRE(st.longest == oracle.longest_run);
                    REQUIRE(st.frac_in_runs_longer_than(5) ==
                            Catch::Approx(oracle.frac_long_runs).margin(1e-12));
                }
            }
        }
    }
}

TEST_CASE("run histogram accounts for every nucleotide", "[bio]") {
    const auto z = from_letters("AACCCGTTTTA");
    const RunStats st = run_stats(z);
    std::uint64_t covered = 0;
    for (std::size_t len = 0; len < st.run_length_hist.size(); ++len)
        covered += st.run_length_hist[len] * len;
    CHECK(covered == z.size());
    CHECK(st.run_length_hist[1] == 2);  // G, final A
    CHECK(st.run_length_hist[2] == 1);  // AA
    CHECK(st.run_length_hist[3] == 1);  // CCC
    CHECK(st.run_length_hist[4] == 1);  // TTTT
    CHECK(st.longest == 4);
}

TEST_CASE("accumulation does not merge runs across sequences", "[bio]") {
    RunStats st;
    st.accumulate(from_letters("AAA"));
    st.accumulate(from_letters("AAA"));
    CHECK(st.longest == 3);
    CHECK(st.run_length_hist[3] == 2);
    CHECK(st.total == 6);
}

TEST_CASE("validation reports specific failure reasons", "[bio]") {
    const BioReport bad_run = validate(from_letters("AAAAAAACGCGCG"));
    CHECK_FALSE(bad_run.desirable);
    REQUIRE(bad_run.reasons.size() == 1);
    CHECK(bad_run.reasons[0].find("homopolymer") != std::string::npos);

    const BioReport bad_gc = validate(from_letters("GCGCGCGCGCGC"));
    CHECK_FALSE(bad_gc.desirable);
    REQUIRE(bad_gc.reasons.size() == 1);
    CHECK(bad_gc.reasons[0].find("GC fraction") != std::string::npos);

    const BioReport good = validate(from_letters("ACGTACGTACGT"));
    CHECK(good.desirable);
    CHECK(good.reasons.empty());
    CHECK(good.gc == Catch::Approx(0.5));
}

TEST_CASE("empty sequences degrade gracefully", "[bio]") {
    const NucleotideSequence empty;
    CHECK(gc_content(empty) == 0.0);
    const RunStats st = run_stats(empty);
    CHECK(st.total == 0);
    CHECK(st.frac_in_runs_longer_than(5) == 0.0);
}
