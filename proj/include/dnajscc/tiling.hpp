#ifndef DNAJSCC_TILING_HPP
#define DNAJSCC_TILING_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dnajscc/image.hpp"

namespace dnajscc {

inline constexpr int kTileSize = 32;

// One tiling pass over a (possibly zero-padded) source image. Tiles are
// non-overlapping 32x32 blocks; origins are (row,col) in source coordinates,
// negative for the border tiles of a shifted pass.
struct TileGrid {
    std::vector<ImageTensor> tiles;
    std::vector<std::pair<int, int>> origins;
    int pass_shift = 0; // 0 or 16: zero padding applied on every border
    int source_height = 0;
    int source_width = 0;
    int channels = 0;
};

// Cuts the image into 32x32 tiles. shift=16 zero-pads the whole image by 16
// pixels on each border first, so the second pass is offset by half a tile
// relative to the first; averaging the two decoded passes removes block seams.
inline TileGrid tile_image(const ImageTensor& img, int shift) {
    if (shift != 0 && shift != 16)
        throw std::invalid_argument("tile_image: shift must be 0 or 16, got " + std::to_string(shift));
    const int ch = img.height + 2 * shift;
    const int cw = img.width + 2 * shift;
    if (ch % kTileSize != 0 || cw % kTileSize != 0) {
        const int need_h = (kTileSize - ch % kTileSize) % kTileSize;
        const int need_w = (kTileSize - cw % kTileSize) % kTileSize;
        throw std::invalid_argument(
            "tile_image: effective canvas " + std::to_string(ch) + "x" + std::to_string(cw) +
            " is not a multiple of 32; pad the image by " + std::to_string(need_h) + " rows and " +
            std::to_string(need_w) + " columns first");
    }
    TileGrid grid;
    grid.pass_shift = shift;
    grid.source_height = img.height;
    grid.source_width = img.width;
    grid.channels = img.channels;
    for (int ty = 0; ty < ch; ty += kTileSize) {
        for (int tx = 0; tx < cw; tx += kTileSize) {
            ImageTensor tile(kTileSize, kTileSize, img.channels);
            for (int c = 0; c < img.channels; ++c) {
                for (int y = 0; y < kTileSize; ++y) {
                    const int sy = ty + y - shift;
                    if (sy < 0 || sy >= img.height) continue; // blank padding stays 0
                    for (int x = 0; x < kTileSize; ++x) {
                        const int sx = tx + x - shift;
                        if (sx < 0 || sx >= img.width) continue;
                        tile.at(c, y, x) = img.at(c, sy, sx);
                    }
                }
            }
            grid.tiles.push_back(std::move(tile));
            grid.origins.emplace_back(ty - shift, tx - shift);
        }
    }
    return grid;
}

namespace detail {

inline void check_grid(const TileGrid& g, const char* who) {
    if (g.tiles.size() != g.origins.size())
        throw std::invalid_argument(std::string(who) + ": tile/origin count mismatch");
    for (const auto& t : g.tiles)
        if (t.height != kTileSize || t.width != kTileSize || t.channels != g.channels)
            throw std::invalid_argument(std::string(who) + ": tile geometry mismatch");
}

// Paste tiles into a source-sized canvas, dropping padded border pixels.
inline std::vector<double> mosaic(const TileGrid& g) {
    std::vector<double> out(static_cast<std::size_t>(g.channels) * g.source_height * g.source_width, 0.0);
    for (std::size_t i = 0; i < g.tiles.size(); ++i) {
        const auto [oy, ox] = g.origins[i];
        const ImageTensor& t = g.tiles[i];
        for (int c = 0; c < g.channels; ++c)
            for (int y = 0; y < kTileSize; ++y) {
                const int sy = oy + y;
                if (sy < 0 || sy >= g.source_height) continue;
                for (int x = 0; x < kTileSize; ++x) {
                    const int sx = ox + x;
                    if (sx < 0 || sx >= g.source_width) continue;
                    out[(static_cast<std::size_t>(c) * g.source_height + sy) * g.source_width + sx] =
                        t.at(c, y, x);
                }
            }
    }
    return out;
}

} // namespace detail

// Merges the two stitching passes: per-pixel arithmetic mean of the pass-0 and
// pass-16 mosaics, rounded half away from zero. Pass either grid order.
inline ImageTensor reassemble(const TileGrid& pass0, const TileGrid& pass1) {
    detail::check_grid(pass0, "reassemble");
    detail::check_grid(pass1, "reassemble");
    if (pass0.source_height != pass1.source_height || pass0.source_width != pass1.source_width ||
        pass0.channels != pass1.channels)
        throw std::invalid_argument("reassemble: passes decode different source geometries");
    if ((pass0.pass_shift == 0) == (pass1.pass_shift == 0))
        throw std::invalid_argument("reassemble: expected one pass with shift 0 and one with shift 16");
    auto m0 = detail::mosaic(pass0);
    auto m1 = detail::mosaic(pass1);
    ImageTensor out(pass0.source_height, pass0.source_width, pass0.channels);
    for (std::size_t i = 0; i < m0.size(); ++i) {
        double v = round_half_away((m0[i] + m1[i]) / 2.0);
        if (v < 0.0) v = 0.0;
        if (v > 255.0) v = 255.0;
        out.pixels[i] = static_cast<std::uint8_t>(v);
    }
    return out;
}

// Single-pass mode: the degenerate average is just the pass-0 mosaic.
inline ImageTensor reassemble(const TileGrid& pass0) {
    detail::check_grid(pass0, "reassemble");
    auto m0 = detail::mosaic(pass0);
    ImageTensor out(pass0.source_height, pass0.source_width, pass0.channels);
    for (std::size_t i = 0; i < m0.size(); ++i)
        out.pixels[i] = static_cast<std::uint8_t>(m0[i]);
    return out;
}

} // namespace dnajscc

#endif
