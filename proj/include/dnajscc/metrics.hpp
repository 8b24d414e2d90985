#ifndef DNAJSCC_METRICS_HPP
#define DNAJSCC_METRICS_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dnajscc/image.hpp"

namespace dnajscc {

inline constexpr double kPsnrCap = 100.0; // reported for bit-identical images

// Peak signal-to-noise ratio on 8-bit pixels: 10*log10(255^2 / MSE).
inline double psnr(const ImageTensor& a, const ImageTensor& b) {
    if (a.height != b.height || a.width != b.width || a.channels != b.channels)
        throw std::invalid_argument("psnr: image dimensions differ");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        const double e = static_cast<double>(a.pixels[i]) - static_cast<double>(b.pixels[i]);
        acc += e * e;
    }
    const double mse = acc / static_cast<double>(a.pixels.size());
    if (mse == 0.0) return kPsnrCap;
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

inline double mean_psnr(const std::vector<ImageTensor>& a, const std::vector<ImageTensor>& b) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("mean_psnr: mismatched or empty image lists");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += psnr(a[i], b[i]);
    return acc / static_cast<double>(a.size());
}

namespace detail {
inline const std::vector<double>& ssim_gaussian_window() {
    // 11x11 Gaussian with sigma 1.5, normalized to sum 1.
    static const std::vector<double> w = [] {
        std::vector<double> win(11 * 11);
        double sum = 0.0;
        for (int y = 0; y < 11; ++y)
            for (int x = 0; x < 11; ++x) {
                const double dy = y - 5.0, dx = x - 5.0;
                const double g = std::exp(-(dx * dx + dy * dy) / (2.0 * 1.5 * 1.5));
                win[static_cast<std::size_t>(y * 11 + x)] = g;
                sum += g;
            }
        for (double& g : win) g /= sum;
        return win;
    }();
    return w;
}
} // namespace detail

// Structural similarity with the standard 11x11 Gaussian window (sigma 1.5),
// evaluated only where the window fully fits, averaged over positions and
// then over channels.
inline double ssim(const ImageTensor& a, const ImageTensor& b) {
    if (a.height != b.height || a.width != b.width || a.channels != b.channels)
        throw std::invalid_argument("ssim: image dimensions differ");
    if (a.height < 11 || a.width < 11)
        throw std::invalid_argument("ssim: images smaller than the 11x11 window");

    const double c1 = (0.01 * 255.0) * (0.01 * 255.0);
    const double c2 = (0.03 * 255.0) * (0.03 * 255.0);
    const std::vector<double>& win = detail::ssim_gaussian_window();

    double channel_acc = 0.0;
    for (int ch = 0; ch < a.channels; ++ch) {
        const std::size_t plane = static_cast<std::size_t>(ch) * static_cast<std::size_t>(a.height) *
                                  static_cast<std::size_t>(a.width);
        double map_acc = 0.0;
        int map_count = 0;
        for (int y = 0; y + 11 <= a.height; ++y) {
            for (int x = 0; x + 11 <= a.width; ++x) {
                double mu1 = 0.0, mu2 = 0.0, s11 = 0.0, s22 = 0.0, s12 = 0.0;
                for (int wy = 0; wy < 11; ++wy) {
                    for (int wx = 0; wx < 11; ++wx) {
                        const std::size_t idx =
                            plane + static_cast<std::size_t>(y + wy) * static_cast<std::size_t>(a.width) +
                            static_cast<std::size_t>(x + wx);
                        const double w = win[static_cast<std::size_t>(wy * 11 + wx)];
                        const double p1 = static_cast<double>(a.pixels[idx]);
                        const double p2 = static_cast<double>(b.pixels[idx]);
                        mu1 += w * p1;
                        mu2 += w * p2;
                        s11 += w * p1 * p1;
                        s22 += w * p2 * p2;
                        s12 += w * p1 * p2;
                    }
                }
                const double var1 = s11 - mu1 * mu1;
                const double var2 = s22 - mu2 * mu2;
                const double cov = s12 - mu1 * mu2;
                const double num = (2.0 * mu1 * mu2 + c1) * (2.0 * cov + c2);
                const double den = (mu1 * mu1 + mu2 * mu2 + c1) * (var1 + var2 + c2);
                map_acc += num / den;
                ++map_count;
            }
        }
        channel_acc += map_acc / map_count;
    }
    return channel_acc / a.channels;
}

inline double mean_ssim(const std::vector<ImageTensor>& a, const std::vector<ImageTensor>& b) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("mean_ssim: mismatched or empty image lists");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += ssim(a[i], b[i]);
    return acc / static_cast<double>(a.size());
}

} // namespace dnajscc

#endif
