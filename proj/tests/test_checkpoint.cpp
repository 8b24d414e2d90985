#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstring>
#include <string>

#include "dnajscc/checkpoint.hpp"

using namespace dnajscc;

namespace {

CodecModel perturbed_model(SystemConfig cfg) {
    CodecModel model(cfg);
    // Move every tensor away from its fresh-init state so a round trip that
    // silently re-initialized would be caught.
    double bump = 0.125;
    for (Param* p : model.params())
        for (double& x : p->value.data) x += (bump *= -1.0009);
    for (Buffer* b : model.buffers())
        for (double& x : b->value.data) x += 0.25;
    return model;
}

// Recompute the trailing checksum after deliberately editing archive bytes,
// so the tests below reach the field validation behind it.
std::string refix_checksum(std::string bytes) {
    const std::size_t body = bytes.size() - sizeof(std::uint64_t);
    const std::uint64_t h = detail::fnv1a(bytes.substr(0, body));
    std::memcpy(bytes.data() + body, &h, sizeof(h));
    return bytes;
}

} // namespace

TEST_CASE("serialize then deserialize restores every tensor exactly", "[checkpoint]") {
    SystemConfig cfg;
    cfg.c = 2;
    cfg.alpha = 175.0;
    cfg.seed = 77;
    CodecModel model = perturbed_model(cfg);

    const std::string bytes = serialize_checkpoint(model);
    CodecModel back = deserialize_checkpoint(bytes);

    CHECK(back.config().c == cfg.c);
    CHECK(back.config().v == cfg.v);
    CHECK(back.config().d == cfg.d);
    CHECK(back.config().s == cfg.s);
    CHECK(back.config().alpha == cfg.alpha);
    CHECK(back.config().gamma_train == cfg.gamma_train);
    CHECK(back.config().seed == cfg.seed);

    const auto ps = model.params();
    const auto qs = back.params();
    REQUIRE(ps.size() == qs.size());
    for (std::size_t i = 0; i < ps.size(); ++i) {
        REQUIRE(qs[i]->name == ps[i]->name);
        REQUIRE(qs[i]->value.shape == ps[i]->value.shape);
        REQUIRE(qs[i]->value.data == ps[i]->value.data); // bit-for-bit
    }
    const auto bs = model.buffers();
    const auto cs = back.buffers();
    REQUIRE(bs.size() == cs.size());
    for (std::size_t i = 0; i < bs.size(); ++i)
        REQUIRE(cs[i]->value.data == bs[i]->value.data);

    // Serializing the restored model reproduces the archive byte for byte.
    CHECK(serialize_checkpoint(back) == bytes);
}

TEST_CASE("flipped byte fails the checksum", "[checkpoint]") {
    CodecModel model = perturbed_model(SystemConfig{});
    std::string bytes = serialize_checkpoint(model);
    bytes[bytes.size() / 2] = static_cast<char>(bytes[bytes.size() / 2] ^ 0x40);
    CHECK_THROWS_WITH(deserialize_checkpoint(bytes),
                      Catch::Matchers::ContainsSubstring("checksum"));
}

TEST_CASE("wrong magic is rejected", "[checkpoint]") {
    CodecModel model = perturbed_model(SystemConfig{});
    std::string bytes = serialize_checkpoint(model);
    bytes[0] = 'X';
    CHECK_THROWS_WITH(deserialize_checkpoint(refix_checksum(bytes)),
                      Catch::Matchers::ContainsSubstring("bad magic"));
}

TEST_CASE("unknown format version is rejected", "[checkpoint]") {
    CodecModel model = perturbed_model(SystemConfig{});
    std::string bytes = serialize_checkpoint(model);
    const std::uint32_t bogus = 999;
    std::memcpy(bytes.data() + sizeof(detail::kCheckpointMagic), &bogus, sizeof(bogus));
    CHECK_THROWS_WITH(deserialize_checkpoint(refix_checksum(bytes)),
                      Catch::Matchers::ContainsSubstring("version 999"));
}

TEST_CASE("truncated archives are rejected", "[checkpoint]") {
    CodecModel model = perturbed_model(SystemConfig{});
    const std::string bytes = serialize_checkpoint(model);

    CHECK_THROWS_WITH(deserialize_checkpoint(bytes.substr(0, 10)),
                      Catch::Matchers::ContainsSubstring("too small"));
    // Cut inside the tensor section, checksum made valid again so the reader
    // reaches the structural check.
    CHECK_THROWS_AS(deserialize_checkpoint(refix_checksum(bytes.substr(0, bytes.size() / 2))),
                    std::runtime_error);
    // Extra trailing bytes are also an error.
    std::string padded = bytes.substr(0, bytes.size() - sizeof(std::uint64_t));
    padded.append(16, '\0');
    padded.append(sizeof(std::uint64_t), '\0');
    CHECK_THROWS_AS(deserialize_checkpoint(refix_checksum(padded)), std::runtime_error);
}

TEST_CASE("file save and load round trip", "[checkpoint]") {
    SystemConfig cfg;
    cfg.c = 8;
    cfg.seed = 31337;
    CodecModel model = perturbed_model(cfg);
    const std::string path = "checkpoint_roundtrip_test.bin";
    save_checkpoint(path, model);
    CodecModel back = load_checkpoint(path);
    std::remove(path.c_str());

    CHECK(back.config().c == 8);
    CHECK(back.config().k() == 512);
    const auto ps = model.params();
    const auto qs = back.params();
    REQUIRE(ps.size() == qs.size());
    for (std::size_t i = 0; i < ps.size(); ++i) REQUIRE(qs[i]->value.data == ps[i]->value.data);

    CHECK_THROWS_AS(load_checkpoint("no_such_dir/model.bin"), std::runtime_error);
}

TEST_CASE("configuration JSON round trip", "[checkpoint]") {
    SystemConfig cfg;
    cfg.c = 4;
    cfg.v = 5;
    cfg.d = 16;
    cfg.s = 128;
    cfg.alpha = 12.5;
    cfg.gamma_train = 0.015;
    cfg.seed = 0xFEEDBEEFULL;
    const SystemConfig back = config_from_json(config_to_json(cfg));
    CHECK(back.c == cfg.c);
    CHECK(back.v == cfg.v);
    CHECK(back.d == cfg.d);
    CHECK(back.s == cfg.s);
    CHECK(back.alpha == cfg.alpha);
    CHECK(back.gamma_train == cfg.gamma_train);
    CHECK(back.seed == cfg.seed);
    CHECK_THROWS(config_from_json(nlohmann::json{{"c", 2}}));
}
