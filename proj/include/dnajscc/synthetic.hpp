#ifndef DNAJSCC_SYNTHETIC_HPP
#define DNAJSCC_SYNTHETIC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "dnajscc/common.hpp"
#include "dnajscc/image.hpp"

namespace dnajscc {

namespace detail {
inline constexpr std::uint64_t kSyntheticTag = 0x51AD;
}

// Procedurally generated 32x32 RGB images with natural-image statistics:
// smooth color gradients, a few soft-edged shapes, low-frequency texture and
// mild sensor-like noise. Deterministic in (seed, index).
inline ImageTensor make_synthetic_image(std::uint64_t seed, std::uint64_t index) {
    auto rng = make_rng(derive_key(seed, {detail::kSyntheticTag, index}));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const int n = 32;
    std::vector<double> plane(static_cast<std::size_t>(3 * n * n));

    // Gradient background with a random orientation shared across channels
    // so the image has a coherent illumination direction.
    const double angle = unit(rng) * 2.0 * M_PI;
    const double gx = std::cos(angle), gy = std::sin(angle);
    double base[3], slope[3];
    for (int c = 0; c < 3; ++c) {
        base[c] = 40.0 + 175.0 * unit(rng);
        slope[c] = (unit(rng) - 0.5) * 3.2;
    }
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x)
                plane[static_cast<std::size_t>((c * n + y) * n + x)] =
                    base[c] + slope[c] * (gx * x + gy * y);

    // A few soft shapes (discs and rotated rectangles).
    const int shapes = 2 + static_cast<int>(unit(rng) * 3.0);
    for (int s = 0; s < shapes; ++s) {
        const bool disc = unit(rng) < 0.5;
        const double cx = unit(rng) * n, cy = unit(rng) * n;
        const double r1 = 3.0 + unit(rng) * 9.0;
        const double r2 = disc ? r1 : 2.0 + unit(rng) * 8.0;
        const double rot = unit(rng) * M_PI;
        const double cr = std::cos(rot), sr = std::sin(rot);
        double color[3];
        for (int c = 0; c < 3; ++c) color[c] = 20.0 + 215.0 * unit(rng);
        for (int y = 0; y < n; ++y) {
            for (int x = 0; x < n; ++x) {
                const double dx = x - cx, dy = y - cy;
                const double u = (dx * cr + dy * sr) / r1;
                const double w = (-dx * sr + dy * cr) / r2;
                const double dist = disc ? std::sqrt(u * u + w * w)
                                         : std::max(std::abs(u), std::abs(w));
                // Soft edge over roughly one pixel.
                const double cover = std::clamp((1.0 - dist) * r1 * 0.9, 0.0, 1.0);
                if (cover <= 0.0) continue;
                for (int c = 0; c < 3; ++c) {
                    double& p = plane[static_cast<std::size_t>((c * n + y) * n + x)];
                    p = p * (1.0 - cover) + color[c] * cover;
                }
            }
        }
    }

    // Low-frequency texture plus faint noise.
    const double fx = 0.05 + unit(rng) * 0.25, fy = 0.05 + unit(rng) * 0.25;
    const double ph = unit(rng) * 2.0 * M_PI;
    const double amp = 4.0 + unit(rng) * 10.0;
    std::normal_distribution<double> noise(0.0, 1.6);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x) {
                double& p = plane[static_cast<std::size_t>((c * n + y) * n + x)];
                p += amp * std::sin(fx * x * 2.0 * M_PI + fy * y * 2.0 * M_PI + ph + 0.7 * c);
                p += noise(rng);
            }

    ImageTensor img;
    img.height = n;
    img.width = n;
    img.channels = 3;
    img.pixels.resize(plane.size());
    for (std::size_t i = 0; i < plane.size(); ++i)
        img.pixels[i] = static_cast<std::uint8_t>(std::clamp(plane[i], 0.0, 255.0) + 0.5);
    return img;
}

inline std::vector<ImageTensor> make_synthetic_corpus(std::size_t count, std::uint64_t seed) {
    std::vector<ImageTensor> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(make_synthetic_image(seed, static_cast<std::uint64_t>(i)));
    return out;
}

} // namespace dnajscc

#endif
