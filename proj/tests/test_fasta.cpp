#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <random>
#include <sstream>
#include <string>

#include "dnajscc/channel.hpp"
#include "dnajscc/fasta.hpp"
#include "support/test_util.hpp"

using namespace dnajscc;

namespace {
std::vector<Strand> sample_strands(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> base_dist(0, 3);
    std::uniform_int_distribution<int> len_dist(1, 300);
    std::vector<Strand> strands;
    for (int i = 0; i < count; ++i) {
        Strand st;
        st.origin = StrandOrigin{static_cast<std::uint64_t>(i / 4),
                                 static_cast<std::uint32_t>(i % 2),
                                 static_cast<std::uint32_t>(i % 3)};
        const int len = len_dist(rng);
        for (int j = 0; j < len; ++j) st.bases.push_back(static_cast<Base>(base_dist(rng)));
        strands.push_back(std::move(st));
    }
    return strands;
}
} // namespace

TEST_CASE("serialize then parse returns the same strands", "[fasta]") {
    const std::vector<Strand> strands = sample_strands(99, 12);
    std::ostringstream out;
    write_fasta(out, strands);
    const std::vector<Strand> back = parse_fasta_string(out.str());
    REQUIRE(back.size() == strands.size());
    for (std::size_t i = 0; i < strands.size(); ++i) {
        CHECK(back[i].origin.sequence_id == strands[i].origin.sequence_id);
        CHECK(back[i].origin.strand_index == strands[i].origin.strand_index);
        CHECK(back[i].origin.copy_index == strands[i].origin.copy_index);
        REQUIRE(back[i].bases == strands[i].bases);
    }
}

TEST_CASE("sequence lines wrap at 80 columns", "[fasta]") {
    Strand st;
    st.origin = StrandOrigin{5, 1, 2};
    for (int i = 0; i < 200; ++i) st.bases.push_back(static_cast<Base>(i % 4));
    std::ostringstream out;
    write_fasta(out, {st});

    std::istringstream in(out.str());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == ">5|1|2");
    std::vector<std::size_t> widths;
    while (std::getline(in, line)) widths.push_back(line.size());
    REQUIRE(widths.size() == 3); // 80 + 80 + 40
    CHECK(widths[0] == 80);
    CHECK(widths[1] == 80);
    CHECK(widths[2] == 40);
}

TEST_CASE("parser tolerates CRLF and blank lines", "[fasta]") {
    const std::string text = ">3|0|1\r\n\r\nACGT\r\nTTAA\r\n\r\n";
    const std::vector<Strand> strands = parse_fasta_string(text);
    REQUIRE(strands.size() == 1);
    CHECK(strands[0].origin.sequence_id == 3);
    CHECK(testsupport::bases_to_string(strands[0].bases) == "ACGTTTAA");
}

TEST_CASE("malformed input produces errors naming the line", "[fasta]") {
    CHECK_THROWS_WITH(parse_fasta_string(">12|0\nACGT\n"),
                      Catch::Matchers::ContainsSubstring("line 1"));
    CHECK_THROWS_WITH(parse_fasta_string("ACGT\n"),
                      Catch::Matchers::ContainsSubstring("before any header"));
    CHECK_THROWS_AS(parse_fasta_string(">0|0|0\nACXT\n"), std::invalid_argument);
}

TEST_CASE("empty record keeps its header through a round trip", "[fasta]") {
    Strand st;
    st.origin = StrandOrigin{7, 0, 4};
    std::ostringstream out;
    write_fasta(out, {st});
    const std::vector<Strand> back = parse_fasta_string(out.str());
    REQUIRE(back.size() == 1);
    CHECK(back[0].bases.empty());
    CHECK(back[0].origin.copy_index == 4);
}

TEST_CASE("file round trip", "[fasta]") {
    const std::vector<Strand> strands = sample_strands(4242, 7);
    const std::string path = "fasta_roundtrip_test.fa";
    write_fasta_file(path, strands);
    const std::vector<Strand> back = read_fasta_file(path);
    std::remove(path.c_str());
    REQUIRE(back.size() == strands.size());
    for (std::size_t i = 0; i < strands.size(); ++i) REQUIRE(back[i].bases == strands[i].bases);
    CHECK_THROWS_AS(read_fasta_file("no_such_dir/missing.fa"), std::runtime_error);
}

TEST_CASE("grouping strands by copy inverts flattening", "[fasta]") {
    std::vector<std::vector<Strand>> copies(3);
    for (std::uint32_t c = 0; c < 3; ++c)
        for (std::uint32_t s = 0; s < 2; ++s) {
            Strand st;
            st.origin = StrandOrigin{11, s, c};
            st.bases = {0, 1, 2, 3, static_cast<Base>(c)};
            copies[c].push_back(st);
        }
    const std::vector<Strand> flat = flatten_copies(copies);
    REQUIRE(flat.size() == 6);
    const auto regrouped = group_by_copy(flat);
    REQUIRE(regrouped.size() == 3);
    for (std::uint32_t c = 0; c < 3; ++c) {
        REQUIRE(regrouped[c].size() == 2);
        for (const Strand& st : regrouped[c]) CHECK(st.origin.copy_index == c);
    }
}
