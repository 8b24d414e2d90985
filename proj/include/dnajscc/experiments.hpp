#ifndef DNAJSCC_EXPERIMENTS_HPP
#define DNAJSCC_EXPERIMENTS_HPP

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "dnajscc/bio.hpp"
#include "dnajscc/cifar10.hpp"
#include "dnajscc/metrics.hpp"
#include "dnajscc/pipeline.hpp"
#include "dnajscc/synthetic.hpp"
#include "dnajscc/tiling.hpp"

namespace dnajscc {

// Training and evaluation images come from the CIFAR-10 binary batches when
// available (CIFAR10_DIR environment variable, or ./data/cifar-10-batches-bin),
// otherwise from the built-in procedural corpus so every experiment still
// runs self-contained.
struct Corpus {
    std::vector<ImageTensor> train;
    std::vector<ImageTensor> test;
    std::string source;
};

inline Corpus load_corpus(const std::string& explicit_path, std::size_t train_count,
                          std::size_t test_count, std::uint64_t seed) {
    namespace fs = std::filesystem;
    std::vector<std::string> candidates;
    if (!explicit_path.empty()) candidates.push_back(explicit_path);
    if (const char* env = std::getenv("CIFAR10_DIR")) candidates.push_back(env);
    candidates.push_back("data/cifar-10-batches-bin");

    for (const std::string& cand : candidates) {
        if (!fs::exists(cand)) {
            if (!explicit_path.empty() && cand == explicit_path)
                throw std::runtime_error("load_corpus: dataset path does not exist: " + cand);
            continue;
        }
        Corpus corpus;
        corpus.train = load_cifar10(cand, Cifar10Split::train);
        corpus.test = load_cifar10(cand, Cifar10Split::test);
        corpus.source = "cifar10:" + cand;
        if (train_count && corpus.train.size() > train_count) corpus.train.resize(train_count);
        if (test_count && corpus.test.size() > test_count) corpus.test.resize(test_count);
        return corpus;
    }

    Corpus corpus;
    corpus.train = make_synthetic_corpus(train_count ? train_count : 2000, seed);
    corpus.test = make_synthetic_corpus(test_count ? test_count : 256, seed ^ 0x7E57);
    corpus.source = "synthetic";
    return corpus;
}

struct EvalSummary {
    double psnr = 0.0;
    double ssim = 0.0;
    double gc = 0.0;
    double frac_long_runs = 0.0;
    std::uint64_t longest_run = 0;
    std::size_t images = 0;
};

// Full storage round trip over a set of images at one channel noise level.
// Bio statistics are computed on the encoded sequences before corruption.
inline EvalSummary evaluate_model(CodecModel& model, const std::vector<ImageTensor>& images,
                                  double gamma, ChannelCounts* counts = nullptr) {
    if (images.empty()) throw std::invalid_argument("evaluate_model: empty image set");
    ChannelConfig chan;
    chan.gamma = gamma;
    chan.v = model.config().v;
    chan.s = model.config().s;
    chan.seed = model.config().seed;

    EvalSummary sum;
    RunStats runs;
    for (std::size_t i = 0; i < images.size(); ++i) {
        const NucleotideSequence z = model.encode(images[i]);
        runs.accumulate(z);
        const ImageTensor rec =
            decode_bundle(model, transmit(z, chan, static_cast<std::uint64_t>(i), counts));
        sum.psnr += psnr(images[i], rec);
        sum.ssim += ssim(images[i], rec);
    }
    sum.images = images.size();
    sum.psnr /= static_cast<double>(images.size());
    sum.ssim /= static_cast<double>(images.size());
    sum.gc = runs.gc_fraction();
    sum.frac_long_runs = runs.frac_in_runs_longer_than(kMaxDesirableRun);
    sum.longest_run = runs.longest;
    return sum;
}

// Arbitrary-size images go through the fixed 32x32 codec tile by tile, in
// two half-tile-shifted passes whose reconstructions are averaged. Inputs are
// zero-padded on the bottom/right edge up to a multiple of the tile size and
// cropped back afterwards.
inline ImageTensor big_image_roundtrip(CodecModel& model, const ImageTensor& img,
                                       const ChannelConfig& chan, ChannelCounts* counts = nullptr) {
    const int ph = (kTileSize - img.height % kTileSize) % kTileSize;
    const int pw = (kTileSize - img.width % kTileSize) % kTileSize;
    ImageTensor padded(img.height + ph, img.width + pw, img.channels);
    for (int c = 0; c < img.channels; ++c)
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x) padded.at(c, y, x) = img.at(c, y, x);

    std::uint64_t sequence_id = 0;
    TileGrid passes[2] = {tile_image(padded, 0), tile_image(padded, kTileSize / 2)};
    for (TileGrid& grid : passes)
        for (ImageTensor& tile : grid.tiles)
            tile = store_and_recover(model, tile, chan, sequence_id++, counts);
    const ImageTensor merged = reassemble(passes[0], passes[1]);

    if (ph == 0 && pw == 0) return merged;
    ImageTensor out(img.height, img.width, img.channels);
    for (int c = 0; c < img.channels; ++c)
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x) out.at(c, y, x) = merged.at(c, y, x);
    return out;
}

} // namespace dnajscc

#endif
