#ifndef DNAJSCC_CHECKPOINT_HPP
#define DNAJSCC_CHECKPOINT_HPP

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dnajscc/model.hpp"

namespace dnajscc {

// Binary model archive: magic, format version, JSON-encoded configuration,
// then every parameter and running-statistics buffer as named raw tensors,
// closed by an FNV-1a checksum of everything before it. Layout is
// little-endian, matching the only platforms this builds on.
namespace detail {

inline constexpr char kCheckpointMagic[8] = {'D', 'N', 'A', 'J', 'S', 'C', 'C', '\0'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

inline std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

template <typename T>
void put_raw(std::string& out, const T& value) {
    const char* p = reinterpret_cast<const char*>(&value);
    out.append(p, sizeof(T));
}

template <typename T>
T get_raw(const std::string& in, std::size_t& pos) {
    if (pos + sizeof(T) > in.size())
        throw std::runtime_error("checkpoint: truncated archive at byte " + std::to_string(pos));
    T value;
    std::memcpy(&value, in.data() + pos, sizeof(T));
    pos += sizeof(T);
    return value;
}

inline void put_tensor(std::string& out, const std::string& name, const Tensor& t) {
    put_raw<std::uint64_t>(out, name.size());
    out.append(name);
    put_raw<std::uint32_t>(out, static_cast<std::uint32_t>(t.shape.size()));
    for (int dim : t.shape) put_raw<std::int32_t>(out, dim);
    out.append(reinterpret_cast<const char*>(t.data.data()), t.data.size() * sizeof(double));
}

} // namespace detail

inline nlohmann::json config_to_json(const SystemConfig& cfg) {
    return {{"c", cfg.c},         {"v", cfg.v},
            {"d", cfg.d},         {"s", cfg.s},
            {"alpha", cfg.alpha}, {"gamma_train", cfg.gamma_train},
            {"seed", cfg.seed}};
}

inline SystemConfig config_from_json(const nlohmann::json& j) {
    SystemConfig cfg;
    cfg.c = j.at("c").get<int>();
    cfg.v = j.at("v").get<int>();
    cfg.d = j.at("d").get<int>();
    cfg.s = j.at("s").get<int>();
    cfg.alpha = j.at("alpha").get<double>();
    cfg.gamma_train = j.at("gamma_train").get<double>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    return cfg;
}

inline std::string serialize_checkpoint(CodecModel& model) {
    std::string out;
    out.append(detail::kCheckpointMagic, sizeof(detail::kCheckpointMagic));
    detail::put_raw<std::uint32_t>(out, detail::kCheckpointVersion);

    const std::string cfg = config_to_json(model.config()).dump();
    detail::put_raw<std::uint64_t>(out, cfg.size());
    out.append(cfg);

    const std::vector<Param*> params = model.params();
    const std::vector<Buffer*> buffers = model.buffers();
    detail::put_raw<std::uint64_t>(out, params.size() + buffers.size());
    for (const Param* p : params) detail::put_tensor(out, p->name, p->value);
    for (const Buffer* b : buffers) detail::put_tensor(out, b->name, b->value);

    detail::put_raw<std::uint64_t>(out, detail::fnv1a(out));
    return out;
}

inline void save_checkpoint(const std::string& path, CodecModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
    const std::string bytes = serialize_checkpoint(model);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

inline CodecModel deserialize_checkpoint(const std::string& bytes) {
    if (bytes.size() < sizeof(detail::kCheckpointMagic) + sizeof(std::uint32_t) + sizeof(std::uint64_t))
        throw std::runtime_error("checkpoint: archive too small");

    const std::size_t body_len = bytes.size() - sizeof(std::uint64_t);
    {
        std::size_t pos = body_len;
        const std::uint64_t stored = detail::get_raw<std::uint64_t>(bytes, pos);
        if (stored != detail::fnv1a(bytes.substr(0, body_len)))
            throw std::runtime_error("checkpoint: checksum mismatch, archive corrupted");
    }

    std::size_t pos = 0;
    if (std::memcmp(bytes.data(), detail::kCheckpointMagic, sizeof(detail::kCheckpointMagic)) != 0)
        throw std::runtime_error("checkpoint: bad magic, not a model archive");
    pos += sizeof(detail::kCheckpointMagic);
    const std::uint32_t version = detail::get_raw<std::uint32_t>(bytes, pos);
    if (version != detail::kCheckpointVersion)
        throw std::runtime_error("checkpoint: unsupported format version " + std::to_string(version));

    const std::uint64_t cfg_len = detail::get_raw<std::uint64_t>(bytes, pos);
    if (pos + cfg_len > body_len) throw std::runtime_error("checkpoint: truncated configuration");
    const SystemConfig cfg =
        config_from_json(nlohmann::json::parse(bytes.substr(pos, cfg_len)));
    pos += cfg_len;

    CodecModel model(cfg);
    std::vector<Param*> params = model.params();
    std::vector<Buffer*> buffers = model.buffers();

    const std::uint64_t tensor_count = detail::get_raw<std::uint64_t>(bytes, pos);
    if (tensor_count != params.size() + buffers.size())
        throw std::runtime_error("checkpoint: archive holds " + std::to_string(tensor_count) +
                                 " tensors, model defines " +
                                 std::to_string(params.size() + buffers.size()));

    auto read_into = [&](const std::string& expect_name, Tensor& dst) {
        const std::uint64_t name_len = detail::get_raw<std::uint64_t>(bytes, pos);
        if (pos + name_len > body_len) throw std::runtime_error("checkpoint: truncated tensor name");
        const std::string name = bytes.substr(pos, name_len);
        pos += name_len;
        if (name != expect_name)
            throw std::runtime_error("checkpoint: expected tensor " + expect_name + ", found " + name);
        const std::uint32_t rank = detail::get_raw<std::uint32_t>(bytes, pos);
        std::vector<int> shape(rank);
        for (std::uint32_t i = 0; i < rank; ++i)
            shape[i] = detail::get_raw<std::int32_t>(bytes, pos);
        if (shape != dst.shape)
            throw std::runtime_error("checkpoint: shape mismatch for " + name + ": archive " +
                                     shape_str(shape) + ", model " + shape_str(dst.shape));
        const std::size_t nbytes = dst.data.size() * sizeof(double);
        if (pos + nbytes > body_len) throw std::runtime_error("checkpoint: truncated tensor data");
        std::memcpy(dst.data.data(), bytes.data() + pos, nbytes);
        pos += nbytes;
    };

    for (Param* p : params) read_into(p->name, p->value);
    for (Buffer* b : buffers) read_into(b->name, b->value);
    if (pos != body_len)
        throw std::runtime_error("checkpoint: trailing bytes after last tensor");
    return model;
}

inline CodecModel load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize_checkpoint(bytes);
}

} // namespace dnajscc

#endif
