#ifndef DNAJSCC_LAYERS_HPP
#define DNAJSCC_LAYERS_HPP

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "dnajscc/common.hpp"
#include "dnajscc/tensor.hpp"

namespace dnajscc {

// Learnable tensor plus its gradient accumulator.
struct Param {
    std::string name;
    Tensor value;
    Tensor grad;

    void init_shape(std::string n, std::vector<int> shape) {
        name = std::move(n);
        value = Tensor(shape);
        grad = Tensor(std::move(shape));
    }
};

// Non-learnable persistent state (batch-norm running statistics).
struct Buffer {
    std::string name;
    Tensor value;
};

namespace detail {

// Floor-division output size, matching the usual convolution convention:
// stride-2 kernels may leave the last padded row/column uncovered.
inline int conv_out_extent(int in, int k, int stride, int pad) {
    const int span = in + 2 * pad - k;
    if (span < 0)
        throw std::invalid_argument("conv geometry: kernel " + std::to_string(k) +
                                    " exceeds padded extent " + std::to_string(in + 2 * pad));
    return span / stride + 1;
}

// (N,C,H,W) -> (C*kh*kw, N*oh*ow) patch matrix; zero-padded borders.
inline void im2col(const Tensor& x, int kh, int kw, int stride, int pad, Tensor& cols) {
    const int N = x.shape[0], C = x.shape[1], H = x.shape[2], W = x.shape[3];
    const int oh = conv_out_extent(H, kh, stride, pad);
    const int ow = conv_out_extent(W, kw, stride, pad);
    cols = Tensor({C * kh * kw, N * oh * ow});
    const std::size_t ncols = static_cast<std::size_t>(N) * oh * ow;
    for (int c = 0; c < C; ++c)
        for (int ky = 0; ky < kh; ++ky)
            for (int kx = 0; kx < kw; ++kx) {
                double* row = cols.data.data() + static_cast<std::size_t>((c * kh + ky) * kw + kx) * ncols;
                for (int n = 0; n < N; ++n)
                    for (int oy = 0; oy < oh; ++oy) {
                        const int sy = oy * stride - pad + ky;
                        double* dst = row + (static_cast<std::size_t>(n) * oh + oy) * ow;
                        if (sy < 0 || sy >= H) continue; // already zero
                        for (int ox = 0; ox < ow; ++ox) {
                            const int sx = ox * stride - pad + kx;
                            if (sx >= 0 && sx < W) dst[ox] = x.at4(n, c, sy, sx);
                        }
                    }
            }
}

// Adjoint of im2col: scatter-add patches back into an (N,C,H,W) tensor.
inline void col2im_add(const Tensor& cols, int kh, int kw, int stride, int pad, Tensor& x) {
    const int N = x.shape[0], C = x.shape[1], H = x.shape[2], W = x.shape[3];
    const int oh = conv_out_extent(H, kh, stride, pad);
    const int ow = conv_out_extent(W, kw, stride, pad);
    const std::size_t ncols = static_cast<std::size_t>(N) * oh * ow;
    for (int c = 0; c < C; ++c)
        for (int ky = 0; ky < kh; ++ky)
            for (int kx = 0; kx < kw; ++kx) {
                const double* row =
                    cols.data.data() + static_cast<std::size_t>((c * kh + ky) * kw + kx) * ncols;
                for (int n = 0; n < N; ++n)
                    for (int oy = 0; oy < oh; ++oy) {
                        const int sy = oy * stride - pad + ky;
                        if (sy < 0 || sy >= H) continue;
                        const double* src = row + (static_cast<std::size_t>(n) * oh + oy) * ow;
                        for (int ox = 0; ox < ow; ++ox) {
                            const int sx = ox * stride - pad + kx;
                            if (sx >= 0 && sx < W) x.at4(n, c, sy, sx) += src[ox];
                        }
                    }
            }
}

// (N,C,H,W) <-> (C, N*H*W) channel-major views used around the GEMMs.
inline void to_channel_major(const Tensor& x, Tensor& m) {
    const int N = x.shape[0], C = x.shape[1], plane = x.shape[2] * x.shape[3];
    m = Tensor({C, N * plane});
    for (int n = 0; n < N; ++n)
        for (int c = 0; c < C; ++c) {
            const double* src = x.data.data() + (static_cast<std::size_t>(n) * C + c) * plane;
            double* dst = m.data.data() + static_cast<std::size_t>(c) * N * plane +
                          static_cast<std::size_t>(n) * plane;
            std::copy(src, src + plane, dst);
        }
}

inline void from_channel_major(const Tensor& m, int N, int C, int H, int W, Tensor& x) {
    const int plane = H * W;
    x = Tensor({N, C, H, W});
    for (int n = 0; n < N; ++n)
        for (int c = 0; c < C; ++c) {
            const double* src = m.data.data() + static_cast<std::size_t>(c) * N * plane +
                                static_cast<std::size_t>(n) * plane;
            double* dst = x.data.data() + (static_cast<std::size_t>(n) * C + c) * plane;
            std::copy(src, src + plane, dst);
        }
}

inline void uniform_fan_in_init(Tensor& t, int fan_in, std::mt19937_64& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (double& v : t.data) v = dist(rng);
}

} // namespace detail

// ---------------------------------------------------------------------------

class Conv2d {
public:
    Conv2d(std::string name, int in_c, int out_c, int k, int stride, int pad)
        : in_c_(in_c), out_c_(out_c), k_(k), stride_(stride), pad_(pad) {
        weight_.init_shape(name + ".weight", {out_c, in_c * k * k});
        bias_.init_shape(name + ".bias", {out_c});
    }

    void init(std::mt19937_64& rng) {
        const int fan_in = in_c_ * k_ * k_;
        detail::uniform_fan_in_init(weight_.value, fan_in, rng);
        detail::uniform_fan_in_init(bias_.value, fan_in, rng);
    }

    Tensor forward(const Tensor& x) {
        if (x.shape.size() != 4 || x.shape[1] != in_c_)
            throw std::invalid_argument("Conv2d " + weight_.name + ": bad input shape " + shape_str(x.shape));
        in_shape_ = x.shape;
        detail::im2col(x, k_, k_, stride_, pad_, cols_);
        const int N = x.shape[0];
        const int oh = detail::conv_out_extent(x.shape[2], k_, stride_, pad_);
        const int ow = detail::conv_out_extent(x.shape[3], k_, stride_, pad_);
        Tensor out_cm({out_c_, N * oh * ow});
        out_cm.mat(out_c_, N * oh * ow).noalias() =
            weight_.value.mat(out_c_, in_c_ * k_ * k_) * cols_.mat(cols_.shape[0], cols_.shape[1]);
        for (int oc = 0; oc < out_c_; ++oc) {
            double* row = out_cm.data.data() + static_cast<std::size_t>(oc) * N * oh * ow;
            const double b = bias_.value[oc];
            for (int i = 0; i < N * oh * ow; ++i) row[i] += b;
        }
        Tensor out;
        detail::from_channel_major(out_cm, N, out_c_, oh, ow, out);
        return out;
    }

    Tensor backward(const Tensor& dout) {
        const int N = in_shape_[0];
        const int oh = dout.shape[2], ow = dout.shape[3];
        Tensor dmat;
        detail::to_channel_major(dout, dmat);
        auto dm = dmat.mat(out_c_, N * oh * ow);
        weight_.grad.mat(out_c_, in_c_ * k_ * k_).noalias() +=
            dm * cols_.mat(cols_.shape[0], cols_.shape[1]).transpose();
        // Sequential sum instead of Eigen's redux: the vectorized reduction's
        // split depends on buffer alignment, which would make gradients vary
        // between otherwise identical runs.
        for (int oc = 0; oc < out_c_; ++oc) {
            const double* row = dmat.data.data() + static_cast<std::size_t>(oc) * N * oh * ow;
            double s = 0.0;
            for (int i = 0; i < N * oh * ow; ++i) s += row[i];
            bias_.grad[oc] += s;
        }
        Tensor dcols({cols_.shape[0], cols_.shape[1]});
        dcols.mat(dcols.shape[0], dcols.shape[1]).noalias() =
            weight_.value.mat(out_c_, in_c_ * k_ * k_).transpose() * dm;
        Tensor dx(in_shape_);
        detail::col2im_add(dcols, k_, k_, stride_, pad_, dx);
        return dx;
    }

    void collect(std::vector<Param*>& ps) {
        ps.push_back(&weight_);
        ps.push_back(&bias_);
    }

    Param weight_, bias_;

private:
    int in_c_, out_c_, k_, stride_, pad_;
    Tensor cols_;
    std::vector<int> in_shape_;
};

class ConvTranspose2d {
public:
    ConvTranspose2d(std::string name, int in_c, int out_c, int k, int stride, int pad)
        : in_c_(in_c), out_c_(out_c), k_(k), stride_(stride), pad_(pad) {
        weight_.init_shape(name + ".weight", {in_c, out_c * k * k});
        bias_.init_shape(name + ".bias", {out_c});
    }

    void init(std::mt19937_64& rng) {
        const int fan_in = in_c_ * k_ * k_;
        detail::uniform_fan_in_init(weight_.value, fan_in, rng);
        detail::uniform_fan_in_init(bias_.value, fan_in, rng);
    }

    int out_extent(int in) const { return (in - 1) * stride_ - 2 * pad_ + k_; }

    Tensor forward(const Tensor& x) {
        if (x.shape.size() != 4 || x.shape[1] != in_c_)
            throw std::invalid_argument("ConvTranspose2d " + weight_.name + ": bad input shape " +
                                        shape_str(x.shape));
        in_shape_ = x.shape;
        const int N = x.shape[0], ih = x.shape[2], iw = x.shape[3];
        const int OH = out_extent(ih), OW = out_extent(iw);
        detail::to_channel_major(x, x_cm_);
        Tensor cols({out_c_ * k_ * k_, N * ih * iw});
        cols.mat(cols.shape[0], cols.shape[1]).noalias() =
            weight_.value.mat(in_c_, out_c_ * k_ * k_).transpose() * x_cm_.mat(in_c_, N * ih * iw);
        Tensor out({N, out_c_, OH, OW});
        detail::col2im_add(cols, k_, k_, stride_, pad_, out);
        for (int n = 0; n < N; ++n)
            for (int oc = 0; oc < out_c_; ++oc) {
                double* plane = out.data.data() + (static_cast<std::size_t>(n) * out_c_ + oc) * OH * OW;
                const double b = bias_.value[oc];
                for (int i = 0; i < OH * OW; ++i) plane[i] += b;
            }
        return out;
    }

    Tensor backward(const Tensor& dout) {
        const int N = in_shape_[0], ih = in_shape_[2], iw = in_shape_[3];
        Tensor dcols;
        detail::im2col(dout, k_, k_, stride_, pad_, dcols); // grid of dcols == input grid
        weight_.grad.mat(in_c_, out_c_ * k_ * k_).noalias() +=
            x_cm_.mat(in_c_, N * ih * iw) * dcols.mat(dcols.shape[0], dcols.shape[1]).transpose();
        for (int oc = 0; oc < out_c_; ++oc) {
            double g = 0.0;
            const int OH = dout.shape[2], OW = dout.shape[3];
            for (int n = 0; n < N; ++n) {
                const double* plane =
                    dout.data.data() + (static_cast<std::size_t>(n) * out_c_ + oc) * OH * OW;
                for (int i = 0; i < OH * OW; ++i) g += plane[i];
            }
            bias_.grad[oc] += g;
        }
        Tensor dx_cm({in_c_, N * ih * iw});
        dx_cm.mat(in_c_, N * ih * iw).noalias() =
            weight_.value.mat(in_c_, out_c_ * k_ * k_) * dcols.mat(dcols.shape[0], dcols.shape[1]);
        Tensor dx;
        detail::from_channel_major(dx_cm, N, in_c_, ih, iw, dx);
        return dx;
    }

    void collect(std::vector<Param*>& ps) {
        ps.push_back(&weight_);
        ps.push_back(&bias_);
    }

    Param weight_, bias_;

private:
    int in_c_, out_c_, k_, stride_, pad_;
    Tensor x_cm_;
    std::vector<int> in_shape_;
};

// Batch statistics while training, running averages at evaluation.
class BatchNorm2d {
public:
    static constexpr double kEps = 1e-5;
    static constexpr double kMomentum = 0.1;

    BatchNorm2d(std::string name, int channels) : c_(channels) {
        gamma_.init_shape(name + ".gamma", {channels});
        beta_.init_shape(name + ".beta", {channels});
        gamma_.value.fill(1.0);
        running_mean_.name = name + ".running_mean";
        running_mean_.value = Tensor({channels});
        running_var_.name = name + ".running_var";
        running_var_.value = Tensor({channels});
        running_var_.value.fill(1.0);
    }

    Tensor forward(const Tensor& x, bool training) {
        const int N = x.shape[0], C = x.shape[1], plane = x.shape[2] * x.shape[3];
        if (C != c_) throw std::invalid_argument("BatchNorm2d " + gamma_.name + ": channel mismatch");
        const std::size_t M = static_cast<std::size_t>(N) * plane;
        training_ = training;
        Tensor y(x.shape);
        xhat_ = Tensor(x.shape);
        invstd_.assign(c_, 0.0);
        for (int c = 0; c < C; ++c) {
            double mean, var;
            if (training) {
                double sum = 0.0, sq = 0.0;
                for (int n = 0; n < N; ++n) {
                    const double* p = x.data.data() + (static_cast<std::size_t>(n) * C + c) * plane;
                    for (int i = 0; i < plane; ++i) {
                        sum += p[i];
                        sq += p[i] * p[i];
                    }
                }
                mean = sum / static_cast<double>(M);
                var = sq / static_cast<double>(M) - mean * mean;
                if (var < 0.0) var = 0.0;
                const double unbiased = M > 1 ? var * static_cast<double>(M) / static_cast<double>(M - 1) : var;
                running_mean_.value[c] = (1.0 - kMomentum) * running_mean_.value[c] + kMomentum * mean;
                running_var_.value[c] = (1.0 - kMomentum) * running_var_.value[c] + kMomentum * unbiased;
            } else {
                mean = running_mean_.value[c];
                var = running_var_.value[c];
            }
            const double istd = 1.0 / std::sqrt(var + kEps);
            invstd_[c] = istd;
            const double g = gamma_.value[c], b = beta_.value[c];
            for (int n = 0; n < N; ++n) {
                const double* p = x.data.data() + (static_cast<std::size_t>(n) * C + c) * plane;
                double* xh = xhat_.data.data() + (static_cast<std::size_t>(n) * C + c) * plane;
                double* py = y.data.data() + (static_cast<std::size_t>(n) * C + c) * plane;
                for (int i = 0; i < plane; ++i) {
                    xh[i] = (p[i] - mean) * istd;
                    py[i] = g * xh[i] + b;
                }
            }
        }
        return y;
    }

    Tensor backward(const Tensor& dy) {
        const int N = dy.shape[0], C = dy.shape[1], plane = dy.shape[2] * dy.shape[3];
        const double M = static_cast<double>(N) * plane;
        Tensor dx(dy.shape);
        for (int c = 0; c < C; ++c) {
            double sum_dy = 0.0, sum_dy_xhat = 0.0;
            for (int n = 0; n < N; ++n) {
                const double* pdy = dy.data.data() + (static_cast<std::size_t>(n) * C + c) * plane;
                const double* xh = xhat_.data.data() + (static_cast<std::size_t>(n) * C + c) * plane;
                for (int i = 0; i < plane; ++i) {
                    sum_dy += pdy[i];
                    sum_dy_xhat += pdy[i] * xh[i];
                }
            }
            gamma_.grad[c] += sum_dy_xhat;
            beta_.grad[c] += sum_dy;
            const double g = gamma_.value[c], istd = invstd_[c];
            for (int n = 0; n < N; ++n) {
                const double* pdy = dy.data.data() + (static_cast<std::size_t>(n) * C + c) * plane;
                const double* xh = xhat_.data.data() + (static_cast<std::size_t>(n) * C + c) * plane;
                double* pdx = dx.data.data() + (static_cast<std::size_t>(n) * C + c) * plane;
                if (training_) {
                    for (int i = 0; i < plane; ++i)
                        pdx[i] = g * istd / M * (M * pdy[i] - sum_dy - xh[i] * sum_dy_xhat);
                } else {
                    for (int i = 0; i < plane; ++i) pdx[i] = g * istd * pdy[i];
                }
            }
        }
        return dx;
    }

    void collect(std::vector<Param*>& ps) {
        ps.push_back(&gamma_);
        ps.push_back(&beta_);
    }
    void collect_buffers(std::vector<Buffer*>& bs) {
        bs.push_back(&running_mean_);
        bs.push_back(&running_var_);
    }

    Param gamma_, beta_;
    Buffer running_mean_, running_var_;

private:
    int c_;
    bool training_ = true;
    Tensor xhat_;
    std::vector<double> invstd_;
};

// Single learnable slope shared across channels, initial value 0.25.
class PReLU {
public:
    explicit PReLU(std::string name) { slope_.init_shape(name + ".slope", {1}); slope_.value[0] = 0.25; }

    Tensor forward(const Tensor& x) {
        x_ = x;
        Tensor y(x.shape);
        const double a = slope_.value[0];
        for (std::size_t i = 0; i < x.data.size(); ++i)
            y.data[i] = x.data[i] > 0.0 ? x.data[i] : a * x.data[i];
        return y;
    }

    Tensor backward(const Tensor& dy) {
        Tensor dx(dy.shape);
        const double a = slope_.value[0];
        double da = 0.0;
        for (std::size_t i = 0; i < dy.data.size(); ++i) {
            if (x_.data[i] > 0.0) {
                dx.data[i] = dy.data[i];
            } else {
                dx.data[i] = a * dy.data[i];
                da += dy.data[i] * x_.data[i];
            }
        }
        slope_.grad[0] += da;
        return dx;
    }

    void collect(std::vector<Param*>& ps) { ps.push_back(&slope_); }

    Param slope_;

private:
    Tensor x_;
};

class SigmoidLayer {
public:
    Tensor forward(const Tensor& x) {
        y_ = Tensor(x.shape);
        for (std::size_t i = 0; i < x.data.size(); ++i) y_.data[i] = sigmoid(x.data[i]);
        return y_;
    }
    Tensor backward(const Tensor& dy) {
        Tensor dx(dy.shape);
        for (std::size_t i = 0; i < dy.data.size(); ++i)
            dx.data[i] = dy.data[i] * y_.data[i] * (1.0 - y_.data[i]);
        return dx;
    }

private:
    Tensor y_;
};

// 1-D convolution merging the v received copies: v input channels, one output
// channel, kernel 3, stride 1, no padding, so length K collapses to K-2 = k.
class Conv1dMerge {
public:
    Conv1dMerge(std::string name, int in_channels) : v_(in_channels) {
        weight_.init_shape(name + ".weight", {in_channels, 3});
        bias_.init_shape(name + ".bias", {1});
    }

    void init(std::mt19937_64& rng) {
        detail::uniform_fan_in_init(weight_.value, v_ * 3, rng);
        detail::uniform_fan_in_init(bias_.value, v_ * 3, rng);
    }

    Tensor forward(const Tensor& x) {
        if (x.shape.size() != 3 || x.shape[1] != v_)
            throw std::invalid_argument("Conv1dMerge: expected (N," + std::to_string(v_) +
                                        ",K) input, got " + shape_str(x.shape));
        const int N = x.shape[0], K = x.shape[2];
        if (K < 3) throw std::invalid_argument("Conv1dMerge: K must be >= 3");
        x_ = x;
        const int L = K - 2;
        Tensor y({N, L});
        for (int n = 0; n < N; ++n)
            for (int t = 0; t < L; ++t) {
                double acc = bias_.value[0];
                for (int j = 0; j < v_; ++j) {
                    const double* in = x.data.data() + (static_cast<std::size_t>(n) * v_ + j) * K + t;
                    const double* w = weight_.value.data.data() + static_cast<std::size_t>(j) * 3;
                    acc += w[0] * in[0] + w[1] * in[1] + w[2] * in[2];
                }
                y.at2(n, t) = acc;
            }
        return y;
    }

    Tensor backward(const Tensor& dy) {
        const int N = x_.shape[0], K = x_.shape[2], L = K - 2;
        Tensor dx(x_.shape);
        for (int n = 0; n < N; ++n)
            for (int t = 0; t < L; ++t) {
                const double g = dy.at2(n, t);
                bias_.grad[0] += g;
                for (int j = 0; j < v_; ++j) {
                    const double* in = x_.data.data() + (static_cast<std::size_t>(n) * v_ + j) * K + t;
                    double* w_g = weight_.grad.data.data() + static_cast<std::size_t>(j) * 3;
                    double* dxp = dx.data.data() + (static_cast<std::size_t>(n) * v_ + j) * K + t;
                    const double* w = weight_.value.data.data() + static_cast<std::size_t>(j) * 3;
                    for (int tau = 0; tau < 3; ++tau) {
                        w_g[tau] += g * in[tau];
                        dxp[tau] += g * w[tau];
                    }
                }
            }
        return dx;
    }

    void collect(std::vector<Param*>& ps) {
        ps.push_back(&weight_);
        ps.push_back(&bias_);
    }

    Param weight_, bias_;

private:
    int v_;
    Tensor x_;
};

} // namespace dnajscc

#endif
