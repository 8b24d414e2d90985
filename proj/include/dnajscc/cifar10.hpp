#ifndef DNAJSCC_CIFAR10_HPP
#define DNAJSCC_CIFAR10_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dnajscc/image.hpp"

namespace dnajscc {

// CIFAR-10 binary batch format: records of 3073 bytes, 1 label byte followed
// by 3072 pixel bytes (channel-planar R,G,B, row-major). Labels are read and
// discarded; the task is unsupervised reconstruction.
inline constexpr int kCifarRecordBytes = 3073;
inline constexpr int kCifarImageBytes = 3072;

enum class Cifar10Split { train, test };

inline std::vector<ImageTensor> load_cifar10_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_cifar10: cannot open '" + path + "'");
    in.seekg(0, std::ios::end);
    const std::streamoff size = in.tellg();
    in.seekg(0, std::ios::beg);
    if (size % kCifarRecordBytes != 0) {
        const std::streamoff good = size - (size % kCifarRecordBytes);
        throw std::runtime_error("load_cifar10: '" + path + "' truncated at byte offset " +
                                 std::to_string(good) + " (file size " + std::to_string(size) +
                                 " is not a multiple of " + std::to_string(kCifarRecordBytes) + ")");
    }
    const std::size_t count = static_cast<std::size_t>(size / kCifarRecordBytes);
    std::vector<ImageTensor> images;
    images.reserve(count);
    std::vector<char> record(kCifarRecordBytes);
    for (std::size_t i = 0; i < count; ++i) {
        if (!in.read(record.data(), kCifarRecordBytes))
            throw std::runtime_error("load_cifar10: short read in '" + path + "' at record " +
                                     std::to_string(i));
        ImageTensor img(32, 32, 3);
        // record[0] is the label; pixels follow already channel-planar
        for (int j = 0; j < kCifarImageBytes; ++j)
            img.pixels[j] = static_cast<std::uint8_t>(record[1 + j]);
        images.push_back(std::move(img));
    }
    return images;
}

// `path` may be a single batch file or a dataset directory holding the
// standard batch names (data_batch_1..5.bin / test_batch.bin).
inline std::vector<ImageTensor> load_cifar10(const std::string& path, Cifar10Split split) {
    namespace fs = std::filesystem;
    if (fs::is_directory(path)) {
        std::vector<std::string> names;
        if (split == Cifar10Split::train) {
            for (int i = 1; i <= 5; ++i) names.push_back("data_batch_" + std::to_string(i) + ".bin");
        } else {
            names.push_back("test_batch.bin");
        }
        std::vector<ImageTensor> all;
        for (const auto& name : names) {
            fs::path file = fs::path(path) / name;
            if (!fs::exists(file))
                throw std::runtime_error("load_cifar10: missing batch file '" + file.string() + "'");
            auto batch = load_cifar10_file(file.string());
            all.insert(all.end(), std::make_move_iterator(batch.begin()),
                       std::make_move_iterator(batch.end()));
        }
        return all;
    }
    return load_cifar10_file(path);
}

} // namespace dnajscc

#endif
