#ifndef DNAJSCC_IMAGE_HPP
#define DNAJSCC_IMAGE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dnajscc/common.hpp"
#include "dnajscc/tensor.hpp"

namespace dnajscc {

// 8-bit image, channel-planar row-major (c,y,x). Training images are 32x32x3.
struct ImageTensor {
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<std::uint8_t> pixels; // channels*height*width

    ImageTensor() = default;
    ImageTensor(int h, int w, int c)
        : height(h), width(w), channels(c),
          pixels(static_cast<std::size_t>(h) * w * c, 0) {}

    std::uint8_t& at(int c, int y, int x) {
        return pixels[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    std::uint8_t at(int c, int y, int x) const {
        return pixels[(static_cast<std::size_t>(c) * height + y) * width + x];
    }

    std::size_t pixel_count() const { return pixels.size(); }

    bool same_geometry(const ImageTensor& o) const {
        return height == o.height && width == o.width && channels == o.channels;
    }
};

// Pixel intensities scaled into [0,1]: value = intensity / 255.
inline Tensor normalize(const ImageTensor& img) {
    Tensor t({img.channels, img.height, img.width});
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        t.data[i] = static_cast<double>(img.pixels[i]) / 255.0;
    return t;
}

// Inverse of normalize up to rounding: [0,1] reals back to 8-bit intensities.
inline ImageTensor denormalize(const Tensor& t) {
    if (t.shape.size() != 3)
        throw std::invalid_argument("denormalize: expected (C,H,W) tensor, got " + shape_str(t.shape));
    ImageTensor img(t.shape[1], t.shape[2], t.shape[0]);
    for (std::size_t i = 0; i < t.data.size(); ++i) {
        double v = round_half_away(t.data[i] * 255.0);
        if (v < 0.0) v = 0.0;
        if (v > 255.0) v = 255.0;
        img.pixels[i] = static_cast<std::uint8_t>(v);
    }
    return img;
}

// Batch of same-geometry images stacked into an (N,C,H,W) tensor in [0,1].
inline Tensor normalize_batch(const std::vector<const ImageTensor*>& imgs) {
    if (imgs.empty()) throw std::invalid_argument("normalize_batch: empty batch");
    const ImageTensor& first = *imgs[0];
    Tensor t({static_cast<int>(imgs.size()), first.channels, first.height, first.width});
    std::size_t per = first.pixel_count();
    for (std::size_t n = 0; n < imgs.size(); ++n) {
        if (!imgs[n]->same_geometry(first))
            throw std::invalid_argument("normalize_batch: mixed image geometry");
        for (std::size_t i = 0; i < per; ++i)
            t.data[n * per + i] = static_cast<double>(imgs[n]->pixels[i]) / 255.0;
    }
    return t;
}

} // namespace dnajscc

#endif
