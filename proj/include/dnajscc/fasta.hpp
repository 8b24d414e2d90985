#ifndef DNAJSCC_FASTA_HPP
#define DNAJSCC_FASTA_HPP

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dnajscc/channel.hpp"
#include "dnajscc/common.hpp"

namespace dnajscc {

inline constexpr int kFastaLineWidth = 80;

// Headers carry the metadata needed to reassemble copies:
//   >sequence|strand|copy
inline void write_fasta(std::ostream& out, const std::vector<Strand>& strands) {
    for (const Strand& st : strands) {
        out << '>' << st.origin.sequence_id << '|' << st.origin.strand_index << '|'
            << st.origin.copy_index << '\n';
        for (std::size_t i = 0; i < st.bases.size(); i += kFastaLineWidth) {
            const std::size_t end = std::min(st.bases.size(), i + kFastaLineWidth);
            for (std::size_t j = i; j < end; ++j) out << base_to_char(st.bases[j]);
            out << '\n';
        }
    }
}

inline void write_fasta_file(const std::string& path, const std::vector<Strand>& strands) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_fasta_file: cannot open " + path);
    write_fasta(out, strands);
}

inline std::vector<Strand> parse_fasta(std::istream& in) {
    std::vector<Strand> strands;
    std::string line;
    bool have_current = false;
    Strand current;
    auto flush = [&] {
        if (have_current) strands.push_back(std::move(current));
        current = Strand{};
    };
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '>') {
            flush();
            have_current = true;
            const std::string header = line.substr(1);
            const std::size_t p1 = header.find('|');
            const std::size_t p2 = header.find('|', p1 == std::string::npos ? p1 : p1 + 1);
            if (p1 == std::string::npos || p2 == std::string::npos)
                throw std::runtime_error("parse_fasta: malformed header on line " +
                                         std::to_string(lineno) + ": " + line);
            current.origin.sequence_id = std::stoull(header.substr(0, p1));
            current.origin.strand_index =
                static_cast<std::uint32_t>(std::stoul(header.substr(p1 + 1, p2 - p1 - 1)));
            current.origin.copy_index = static_cast<std::uint32_t>(std::stoul(header.substr(p2 + 1)));
        } else {
            if (!have_current)
                throw std::runtime_error("parse_fasta: sequence data before any header on line " +
                                         std::to_string(lineno));
            for (char ch : line) current.bases.push_back(char_to_base(ch));
        }
    }
    flush();
    return strands;
}

inline std::vector<Strand> parse_fasta_string(const std::string& text) {
    std::istringstream in(text);
    return parse_fasta(in);
}

inline std::vector<Strand> read_fasta_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_fasta_file: cannot open " + path);
    return parse_fasta(in);
}

// Flattens the per-copy strand lists into one record stream and back.
inline std::vector<Strand> flatten_copies(const std::vector<std::vector<Strand>>& copies) {
    std::vector<Strand> flat;
    for (const auto& copy : copies) flat.insert(flat.end(), copy.begin(), copy.end());
    return flat;
}

inline std::vector<std::vector<Strand>> group_by_copy(const std::vector<Strand>& strands) {
    std::uint32_t max_copy = 0;
    for (const Strand& st : strands) max_copy = std::max(max_copy, st.origin.copy_index);
    std::vector<std::vector<Strand>> copies(static_cast<std::size_t>(max_copy) + 1);
    for (const Strand& st : strands) copies[st.origin.copy_index].push_back(st);
    return copies;
}

} // namespace dnajscc

#endif
