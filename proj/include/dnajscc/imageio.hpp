#ifndef DNAJSCC_IMAGEIO_HPP
#define DNAJSCC_IMAGEIO_HPP

#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <png.h>

#include "dnajscc/image.hpp"

namespace dnajscc {

// Binary PPM (P6 for RGB, P5 for grayscale), 8 bits per sample.
inline void write_ppm(const std::string& path, const ImageTensor& img) {
    if (img.channels != 1 && img.channels != 3)
        throw std::invalid_argument("write_ppm: only 1 or 3 channel images supported");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_ppm: cannot open " + path);
    out << (img.channels == 3 ? "P6" : "P5") << '\n'
        << img.width << ' ' << img.height << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(img.width) *
                                   static_cast<std::size_t>(img.channels));
    const std::size_t plane = static_cast<std::size_t>(img.height) * static_cast<std::size_t>(img.width);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < img.channels; ++c)
                row[static_cast<std::size_t>(x) * img.channels + static_cast<std::size_t>(c)] =
                    img.pixels[static_cast<std::size_t>(c) * plane +
                               static_cast<std::size_t>(y) * img.width + static_cast<std::size_t>(x)];
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
    if (!out) throw std::runtime_error("write_ppm: write failed for " + path);
}

inline ImageTensor read_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_ppm: cannot open " + path);
    std::string magic;
    in >> magic;
    if (magic != "P6" && magic != "P5")
        throw std::runtime_error("read_ppm: unsupported magic '" + magic + "' in " + path);
    auto next_token = [&in, &path] {
        // Header tokens may be separated by whitespace or # comments.
        std::string tok;
        while (in >> tok) {
            if (tok[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return std::stoi(tok);
        }
        throw std::runtime_error("read_ppm: truncated header in " + path);
    };
    const int width = next_token();
    const int height = next_token();
    const int maxval = next_token();
    if (maxval != 255) throw std::runtime_error("read_ppm: only 8-bit images supported");
    in.get(); // single whitespace after maxval

    ImageTensor img;
    img.width = width;
    img.height = height;
    img.channels = magic == "P6" ? 3 : 1;
    const std::size_t plane = static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
    img.pixels.resize(plane * static_cast<std::size_t>(img.channels));
    std::vector<unsigned char> row(static_cast<std::size_t>(width) *
                                   static_cast<std::size_t>(img.channels));
    for (int y = 0; y < height; ++y) {
        in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size()));
        if (!in) throw std::runtime_error("read_ppm: truncated pixel data in " + path);
        for (int x = 0; x < width; ++x)
            for (int c = 0; c < img.channels; ++c)
                img.pixels[static_cast<std::size_t>(c) * plane + static_cast<std::size_t>(y) * width +
                           static_cast<std::size_t>(x)] =
                    row[static_cast<std::size_t>(x) * img.channels + static_cast<std::size_t>(c)];
    }
    return img;
}

namespace detail {
struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;
} // namespace detail

// PNG input normalized to 8-bit gray or RGB: 16-bit depth is stripped, the
// alpha channel dropped, palettes expanded.
inline ImageTensor read_png(const std::string& path) {
    detail::FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw std::runtime_error("read_png: cannot open " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("read_png: out of memory");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw std::runtime_error("read_png: out of memory");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("read_png: libpng failed to decode " + path);
    }
    png_init_io(png, fp.get());
    png_read_png(png, info,
                 PNG_TRANSFORM_STRIP_16 | PNG_TRANSFORM_STRIP_ALPHA | PNG_TRANSFORM_EXPAND |
                     PNG_TRANSFORM_PACKING,
                 nullptr);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const int channels = static_cast<int>(png_get_channels(png, info));
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("read_png: unsupported channel count after transforms in " + path);
    }
    png_bytep* rows = png_get_rows(png, info);

    ImageTensor img;
    img.width = static_cast<int>(width);
    img.height = static_cast<int>(height);
    img.channels = channels;
    const std::size_t plane = static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
    img.pixels.resize(plane * static_cast<std::size_t>(channels));
    for (png_uint_32 y = 0; y < height; ++y)
        for (png_uint_32 x = 0; x < width; ++x)
            for (int c = 0; c < channels; ++c)
                img.pixels[static_cast<std::size_t>(c) * plane + static_cast<std::size_t>(y) * width +
                           static_cast<std::size_t>(x)] = rows[y][x * channels + c];

    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

inline void write_png(const std::string& path, const ImageTensor& img) {
    if (img.channels != 1 && img.channels != 3)
        throw std::invalid_argument("write_png: only 1 or 3 channel images supported");
    detail::FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw std::runtime_error("write_png: cannot open " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("write_png: out of memory");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("write_png: out of memory");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("write_png: libpng failed to encode " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
                 static_cast<png_uint_32>(img.height), 8,
                 img.channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);

    const std::size_t plane = static_cast<std::size_t>(img.height) * static_cast<std::size_t>(img.width);
    std::vector<unsigned char> interleaved(plane * static_cast<std::size_t>(img.channels));
    std::vector<png_bytep> rows(static_cast<std::size_t>(img.height));
    for (int y = 0; y < img.height; ++y) {
        rows[static_cast<std::size_t>(y)] =
            interleaved.data() +
            static_cast<std::size_t>(y) * static_cast<std::size_t>(img.width) * img.channels;
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < img.channels; ++c)
                rows[static_cast<std::size_t>(y)][x * img.channels + c] =
                    img.pixels[static_cast<std::size_t>(c) * plane +
                               static_cast<std::size_t>(y) * img.width + static_cast<std::size_t>(x)];
    }
    png_set_rows(png, info, rows.data());
    png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
    png_destroy_write_struct(&png, &info);
}

// Dispatches on file extension: .png, .ppm, .pgm.
inline ImageTensor read_image(const std::string& path) {
    const auto dot = path.find_last_of('.');
    const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    if (ext == "png") return read_png(path);
    if (ext == "ppm" || ext == "pgm") return read_ppm(path);
    throw std::invalid_argument("read_image: unsupported extension '" + ext + "'");
}

inline void write_image(const std::string& path, const ImageTensor& img) {
    const auto dot = path.find_last_of('.');
    const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    if (ext == "png") return write_png(path, img);
    if (ext == "ppm" || ext == "pgm") return write_ppm(path, img);
    throw std::invalid_argument("write_image: unsupported extension '" + ext + "'");
}

} // namespace dnajscc

#endif
