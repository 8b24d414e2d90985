#ifndef DNAJSCC_MODEL_HPP
#define DNAJSCC_MODEL_HPP

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "dnajscc/common.hpp"
#include "dnajscc/image.hpp"
#include "dnajscc/layers.hpp"

namespace dnajscc {

using Base = std::uint8_t;                      // 0=A 1=C 2=G 3=T
using NucleotideSequence = std::vector<Base>;   // length k per image

// Shared hyperparameters; c fixes the code length k = c*8*8 and the
// nucleotide/pixel rate R = k/n with n = 3072.
struct SystemConfig {
    int c = 2;
    int v = 2;
    int d = 8;
    int s = 256;
    double alpha = 75.0;
    double gamma_train = 0.005;
    std::uint64_t seed = 1;

    int k() const { return c * 8 * 8; }
    int pixel_count() const { return 32 * 32 * 3; }
    double rate() const { return static_cast<double>(k()) / pixel_count(); }
};

// The rounding stage backpropagates as identity: the incoming gradient passes
// through unchanged while the forward pass keeps true rounded values.
inline Tensor ste_round_backward(const Tensor& upstream) { return upstream; }

// Maps compressor outputs to bases: z_i = round(3 * sigmoid(a_i)) in {0..3}.
class NucleotideMapper {
public:
    struct Output {
        Tensor soft;                            // 3*sigmoid(a), the surrogate value
        std::vector<NucleotideSequence> bases;  // rounded, one sequence per batch row
    };

    Output forward(const Tensor& a) {
        sig_ = Tensor(a.shape);
        Output out;
        out.soft = Tensor(a.shape);
        const int N = a.shape[0], k = a.shape[1];
        out.bases.assign(N, NucleotideSequence(k));
        for (int n = 0; n < N; ++n)
            for (int i = 0; i < k; ++i) {
                const double sg = sigmoid(a.at2(n, i));
                sig_.at2(n, i) = sg;
                const double soft = 3.0 * sg;
                out.soft.at2(n, i) = soft;
                out.bases[n][i] = static_cast<Base>(round_half_away(soft));
            }
        return out;
    }

    // dL/da given dL/dz; the round step contributes an identity Jacobian.
    Tensor backward(const Tensor& dz) {
        Tensor da = ste_round_backward(dz);
        for (std::size_t i = 0; i < da.data.size(); ++i)
            da.data[i] *= 3.0 * sig_.data[i] * (1.0 - sig_.data[i]);
        return da;
    }

private:
    Tensor sig_;
};

// Compressor: five conv layers taking (N,3,32,32) down to (N,c,8,8), output
// flattened to the length-k latent.
class Encoder {
public:
    explicit Encoder(const SystemConfig& cfg)
        : c_(cfg.c),
          conv1_("enc.conv1", 3, 16, 3, 2, 1),
          conv2_("enc.conv2", 16, 32, 3, 2, 1),
          conv3_("enc.conv3", 32, 32, 3, 1, 1),
          conv4_("enc.conv4", 32, 32, 3, 1, 1),
          conv5_("enc.conv5", 32, cfg.c, 3, 1, 1),
          prelu1_("enc.prelu1"), prelu2_("enc.prelu2"), prelu3_("enc.prelu3"), prelu4_("enc.prelu4"),
          bn2_("enc.bn2", 32), bn3_("enc.bn3", 32), bn4_("enc.bn4", 32) {}

    void init(std::mt19937_64& rng) {
        conv1_.init(rng);
        conv2_.init(rng);
        conv3_.init(rng);
        conv4_.init(rng);
        conv5_.init(rng);
    }

    Tensor forward(const Tensor& x, bool training) {
        if (x.shape.size() != 4 || x.shape[1] != 3 || x.shape[2] != 32 || x.shape[3] != 32)
            throw std::invalid_argument("Encoder: expected (N,3,32,32) input, got " + shape_str(x.shape));
        Tensor h = prelu1_.forward(conv1_.forward(x));
        h = prelu2_.forward(bn2_.forward(conv2_.forward(h), training));
        h = prelu3_.forward(bn3_.forward(conv3_.forward(h), training));
        h = prelu4_.forward(bn4_.forward(conv4_.forward(h), training));
        h = conv5_.forward(h);
        h.reshape({h.shape[0], c_ * 8 * 8});
        return h;
    }

    Tensor backward(const Tensor& da) {
        Tensor g = da;
        g.reshape({g.shape[0], c_, 8, 8});
        g = conv5_.backward(g);
        g = conv4_.backward(bn4_.backward(prelu4_.backward(g)));
        g = conv3_.backward(bn3_.backward(prelu3_.backward(g)));
        g = conv2_.backward(bn2_.backward(prelu2_.backward(g)));
        g = conv1_.backward(prelu1_.backward(g));
        return g;
    }

    void collect(std::vector<Param*>& ps) {
        conv1_.collect(ps); prelu1_.collect(ps);
        conv2_.collect(ps); bn2_.collect(ps); prelu2_.collect(ps);
        conv3_.collect(ps); bn3_.collect(ps); prelu3_.collect(ps);
        conv4_.collect(ps); bn4_.collect(ps); prelu4_.collect(ps);
        conv5_.collect(ps);
    }
    void collect_buffers(std::vector<Buffer*>& bs) {
        bn2_.collect_buffers(bs);
        bn3_.collect_buffers(bs);
        bn4_.collect_buffers(bs);
    }

private:
    int c_;
    Conv2d conv1_, conv2_, conv3_, conv4_, conv5_;
    PReLU prelu1_, prelu2_, prelu3_, prelu4_;
    BatchNorm2d bn2_, bn3_, bn4_;
};

// Copy-merging 1-D convolution followed by the inverse CNN: (N,v,K) scaled
// integers back up to a (N,3,32,32) image in (0,1).
class Decoder {
public:
    explicit Decoder(const SystemConfig& cfg)
        : c_(cfg.c), v_(cfg.v), k_(cfg.k()),
          merge_("dec.merge", cfg.v),
          prelu_m_("dec.prelu_m"),
          tconv1_("dec.tconv1", cfg.c, 32, 3, 1, 1),
          tconv2_("dec.tconv2", 32, 32, 3, 1, 1),
          tconv3_("dec.tconv3", 32, 32, 3, 1, 1),
          tconv4_("dec.tconv4", 32, 16, 4, 2, 1),
          tconv5_("dec.tconv5", 16, 3, 4, 2, 1),
          prelu1_("dec.prelu1"), prelu2_("dec.prelu2"), prelu3_("dec.prelu3"), prelu4_("dec.prelu4"),
          bn2_("dec.bn2", 32), bn3_("dec.bn3", 32), bn4_("dec.bn4", 16) {}

    void init(std::mt19937_64& rng) {
        merge_.init(rng);
        tconv1_.init(rng);
        tconv2_.init(rng);
        tconv3_.init(rng);
        tconv4_.init(rng);
        tconv5_.init(rng);
    }

    // Merge stage on its own: (N,v,K) -> (N,k). Callers scale the integer
    // bundle by 1/4 beforehand.
    Tensor merge_copies(const Tensor& scaled_bundle) {
        const int K = scaled_bundle.shape[2];
        if (K != k_ + 2)
            throw std::invalid_argument("merge_copies: expected K = k+2 = " + std::to_string(k_ + 2) +
                                        ", got " + std::to_string(K));
        return merge_.forward(scaled_bundle);
    }

    Tensor forward(const Tensor& scaled_bundle, bool training) {
        Tensor b = prelu_m_.forward(merge_copies(scaled_bundle));
        b.reshape({b.shape[0], c_, 8, 8});
        Tensor h = prelu1_.forward(tconv1_.forward(b));
        h = prelu2_.forward(bn2_.forward(tconv2_.forward(h), training));
        h = prelu3_.forward(bn3_.forward(tconv3_.forward(h), training));
        h = prelu4_.forward(bn4_.forward(tconv4_.forward(h), training));
        h = sigmoid_.forward(tconv5_.forward(h));
        return h;
    }

    Tensor backward(const Tensor& dxhat) {
        Tensor g = sigmoid_.backward(dxhat);
        g = tconv5_.backward(g);
        g = tconv4_.backward(bn4_.backward(prelu4_.backward(g)));
        g = tconv3_.backward(bn3_.backward(prelu3_.backward(g)));
        g = tconv2_.backward(bn2_.backward(prelu2_.backward(g)));
        g = tconv1_.backward(prelu1_.backward(g));
        g.reshape({g.shape[0], c_ * 8 * 8});
        g = merge_.backward(prelu_m_.backward(g));
        return g;
    }

    void collect(std::vector<Param*>& ps) {
        merge_.collect(ps); prelu_m_.collect(ps);
        tconv1_.collect(ps); prelu1_.collect(ps);
        tconv2_.collect(ps); bn2_.collect(ps); prelu2_.collect(ps);
        tconv3_.collect(ps); bn3_.collect(ps); prelu3_.collect(ps);
        tconv4_.collect(ps); bn4_.collect(ps); prelu4_.collect(ps);
        tconv5_.collect(ps);
    }
    void collect_buffers(std::vector<Buffer*>& bs) {
        bn2_.collect_buffers(bs);
        bn3_.collect_buffers(bs);
        bn4_.collect_buffers(bs);
    }

private:
    int c_, v_, k_;
    Conv1dMerge merge_;
    PReLU prelu_m_;
    ConvTranspose2d tconv1_, tconv2_, tconv3_, tconv4_, tconv5_;
    PReLU prelu1_, prelu2_, prelu3_, prelu4_;
    BatchNorm2d bn2_, bn3_, bn4_;
    SigmoidLayer sigmoid_;
};

class CodecModel {
public:
    explicit CodecModel(const SystemConfig& cfg)
        : cfg_(cfg), encoder_(cfg), decoder_(cfg), mapper_() {
        init_params();
    }

    void init_params() {
        auto rng = make_rng(derive_key(cfg_.seed, {0xC0DEC}));
        encoder_.init(rng);
        decoder_.init(rng);
    }

    const SystemConfig& config() const { return cfg_; }
    Encoder& encoder() { return encoder_; }
    Decoder& decoder() { return decoder_; }
    NucleotideMapper& mapper() { return mapper_; }

    std::vector<Param*> params() {
        std::vector<Param*> ps;
        encoder_.collect(ps);
        decoder_.collect(ps);
        return ps;
    }
    std::vector<Buffer*> buffers() {
        std::vector<Buffer*> bs;
        encoder_.collect_buffers(bs);
        decoder_.collect_buffers(bs);
        return bs;
    }

    // Single-image inference path (evaluation-mode batch norm).
    NucleotideSequence encode(const ImageTensor& img) {
        if (img.height != 32 || img.width != 32 || img.channels != 3)
            throw std::invalid_argument("encode: expected a 32x32x3 image");
        Tensor x = normalize(img);
        x.reshape({1, 3, 32, 32});
        Tensor a = encoder_.forward(x, /*training=*/false);
        auto mapped = mapper_.forward(a);
        return mapped.bases[0];
    }

private:
    SystemConfig cfg_;
    Encoder encoder_;
    Decoder decoder_;
    NucleotideMapper mapper_;
};

} // namespace dnajscc

#endif
