#ifndef DNAJSCC_BIO_HPP
#define DNAJSCC_BIO_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dnajscc/common.hpp"
#include "dnajscc/model.hpp"

namespace dnajscc {

// Wet-lab friendliness limits: homopolymer runs longer than 5 nucleotides and
// GC fractions outside 40..60% degrade synthesis and sequencing fidelity.
inline constexpr int kMaxDesirableRun = 5;
inline constexpr double kGcLow = 0.40;
inline constexpr double kGcHigh = 0.60;

inline double gc_content(const NucleotideSequence& seq) {
    if (seq.empty()) return 0.0;
    std::uint64_t gc = 0;
    for (Base b : seq)
        if (b == 1 || b == 2) ++gc; // C or G
    return static_cast<double>(gc) / static_cast<double>(seq.size());
}

// Homopolymer run accounting, accumulable across many sequences. Runs never
// span sequence boundaries.
struct RunStats {
    std::uint64_t total = 0;
    std::uint64_t longest = 0;
    std::vector<std::uint64_t> run_length_hist; // [len] = number of runs of exactly len
    std::array<std::uint64_t, 4> base_counts{};

    void accumulate(const NucleotideSequence& seq) {
        total += seq.size();
        std::size_t i = 0;
        while (i < seq.size()) {
            std::size_t j = i;
            while (j < seq.size() && seq[j] == seq[i]) ++j;
            const std::size_t len = j - i;
            if (len >= run_length_hist.size()) run_length_hist.resize(len + 1, 0);
            ++run_length_hist[len];
            if (len > longest) longest = len;
            base_counts[seq[i]] += len;
            i = j;
        }
    }

    // Fraction of all nucleotides that sit inside a run longer than n.
    double frac_in_runs_longer_than(int n) const {
        if (total == 0) return 0.0;
        std::uint64_t covered = 0;
        for (std::size_t len = static_cast<std::size_t>(n) + 1; len < run_length_hist.size(); ++len)
            covered += run_length_hist[len] * len;
        return static_cast<double>(covered) / static_cast<double>(total);
    }

    double gc_fraction() const {
        if (total == 0) return 0.0;
        return static_cast<double>(base_counts[1] + base_counts[2]) / static_cast<double>(total);
    }
};

inline RunStats run_stats(const NucleotideSequence& seq) {
    RunStats st;
    st.accumulate(seq);
    return st;
}

struct BioReport {
    bool desirable = false;
    double gc = 0.0;
    std::uint64_t longest_run = 0;
    double frac_long_runs = 0.0; // nucleotides inside runs longer than kMaxDesirableRun
    std::vector<std::string> reasons;
};

inline BioReport validate(const NucleotideSequence& seq, int max_run = kMaxDesirableRun,
                          double gc_low = kGcLow, double gc_high = kGcHigh) {
    BioReport rep;
    const RunStats st = run_stats(seq);
    rep.gc = gc_content(seq);
    rep.longest_run = st.longest;
    rep.frac_long_runs = st.frac_in_runs_longer_than(max_run);
    if (st.longest > static_cast<std::uint64_t>(max_run))
        rep.reasons.push_back("homopolymer run of length " + std::to_string(st.longest) +
                              " exceeds " + std::to_string(max_run));
    if (rep.gc < gc_low || rep.gc > gc_high)
        rep.reasons.push_back("GC fraction " + std::to_string(rep.gc) + " outside [" +
                              std::to_string(gc_low) + ", " + std::to_string(gc_high) + "]");
    rep.desirable = rep.reasons.empty();
    return rep;
}

} // namespace dnajscc

#endif
