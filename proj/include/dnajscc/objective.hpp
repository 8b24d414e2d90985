#ifndef DNAJSCC_OBJECTIVE_HPP
#define DNAJSCC_OBJECTIVE_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dnajscc/model.hpp"
#include "dnajscc/tensor.hpp"

namespace dnajscc {

// Soft constraint targets. A window whose bases are uniformly distributed
// over {0,1,2,3} has mean 1.5 and population variance 1.25; steering every
// window toward those moments suppresses long homopolymer runs and GC skew.
inline constexpr double kTargetMean = 1.5;
inline constexpr double kTargetVariance = 1.25;
inline constexpr double kVarianceWeight = 10.0;

inline constexpr std::pair<double, double> target_values() {
    return {kTargetMean, kTargetVariance};
}

struct WindowSpec {
    int d = 0;      // window length
    int stride = 0; // d/2, half-overlapping
    int count = 0;  // 2k/d - 1
};

inline WindowSpec make_window_spec(int k, int d) {
    if (d < 2 || d % 2 != 0)
        throw std::invalid_argument("make_window_spec: window length d must be even and >= 2");
    if (k < d) throw std::invalid_argument("make_window_spec: sequence shorter than one window");
    if (k % (d / 2) != 0)
        throw std::invalid_argument("make_window_spec: d/2 must divide the sequence length");
    WindowSpec spec;
    spec.d = d;
    spec.stride = d / 2;
    spec.count = 2 * k / d - 1;
    return spec;
}

inline std::vector<int> window_starts(int k, int d) {
    const WindowSpec spec = make_window_spec(k, d);
    std::vector<int> starts(static_cast<std::size_t>(spec.count));
    for (int i = 0; i < spec.count; ++i) starts[static_cast<std::size_t>(i)] = i * spec.stride;
    return starts;
}

// Per-window mean and population variance (divisor d) of one sequence.
struct ConstraintProfile {
    std::vector<double> means;
    std::vector<double> variances;
};

inline ConstraintProfile constraint_profile(const double* z, int k, int d) {
    const WindowSpec spec = make_window_spec(k, d);
    ConstraintProfile prof;
    prof.means.resize(static_cast<std::size_t>(spec.count));
    prof.variances.resize(static_cast<std::size_t>(spec.count));
    for (int i = 0; i < spec.count; ++i) {
        const double* w = z + static_cast<std::size_t>(i) * static_cast<std::size_t>(spec.stride);
        double sum = 0.0;
        for (int t = 0; t < d; ++t) sum += w[t];
        const double mean = sum / d;
        double ss = 0.0;
        for (int t = 0; t < d; ++t) {
            const double c = w[t] - mean;
            ss += c * c;
        }
        prof.means[static_cast<std::size_t>(i)] = mean;
        prof.variances[static_cast<std::size_t>(i)] = ss / d;
    }
    return prof;
}

inline ConstraintProfile constraint_profile(const NucleotideSequence& z, int d) {
    std::vector<double> vals(z.begin(), z.end());
    return constraint_profile(vals.data(), static_cast<int>(vals.size()), d);
}

// Reconstruction loss: mean squared error over all normalized pixels of the
// batch. The gradient is taken with respect to the reconstruction.
inline double l_rq(const Tensor& x, const Tensor& xhat) {
    if (x.shape != xhat.shape)
        throw std::invalid_argument("l_rq: shape mismatch " + shape_str(x.shape) + " vs " +
                                    shape_str(xhat.shape));
    double acc = 0.0;
    for (std::size_t i = 0; i < x.data.size(); ++i) {
        const double e = xhat.data[i] - x.data[i];
        acc += e * e;
    }
    return acc / static_cast<double>(x.data.size());
}

inline Tensor l_rq_grad(const Tensor& x, const Tensor& xhat) {
    Tensor g(xhat.shape);
    const double scale = 2.0 / static_cast<double>(x.data.size());
    for (std::size_t i = 0; i < x.data.size(); ++i)
        g.data[i] = scale * (xhat.data[i] - x.data[i]);
    return g;
}

// Biological constraint loss over soft sequences z of shape (N, k): squared
// deviation of each window's mean from 1.5 plus 10x the squared deviation of
// its variance from 1.25, averaged over windows, then over the batch.
inline double l_bc(const Tensor& z, int d) {
    if (z.shape.size() != 2) throw std::invalid_argument("l_bc: expected (N, k) tensor");
    const int n = z.shape[0], k = z.shape[1];
    const WindowSpec spec = make_window_spec(k, d);
    double acc = 0.0;
    for (int b = 0; b < n; ++b) {
        const ConstraintProfile prof =
            constraint_profile(z.data.data() + static_cast<std::size_t>(b) * static_cast<std::size_t>(k), k, d);
        double seq = 0.0;
        for (int i = 0; i < spec.count; ++i) {
            const double dm = prof.means[static_cast<std::size_t>(i)] - kTargetMean;
            const double dv = prof.variances[static_cast<std::size_t>(i)] - kTargetVariance;
            seq += dm * dm + kVarianceWeight * dv * dv;
        }
        acc += seq / spec.count;
    }
    return acc / n;
}

inline Tensor l_bc_grad(const Tensor& z, int d) {
    if (z.shape.size() != 2) throw std::invalid_argument("l_bc_grad: expected (N, k) tensor");
    const int n = z.shape[0], k = z.shape[1];
    const WindowSpec spec = make_window_spec(k, d);
    Tensor g(z.shape);
    for (int b = 0; b < n; ++b) {
        const double* zb = z.data.data() + static_cast<std::size_t>(b) * static_cast<std::size_t>(k);
        double* gb = g.data.data() + static_cast<std::size_t>(b) * static_cast<std::size_t>(k);
        const ConstraintProfile prof = constraint_profile(zb, k, d);
        for (int i = 0; i < spec.count; ++i) {
            const double mean = prof.means[static_cast<std::size_t>(i)];
            // d(mean)/dz_t = 1/d; d(var)/dz_t = (2/d)(z_t - mean)
            const double dm = 2.0 * (mean - kTargetMean) / (spec.count * n) / d;
            const double dv_coeff =
                2.0 * kVarianceWeight * (prof.variances[static_cast<std::size_t>(i)] - kTargetVariance) /
                (spec.count * n) * 2.0 / d;
            const int start = i * spec.stride;
            for (int t = 0; t < d; ++t)
                gb[start + t] += dm + dv_coeff * (zb[start + t] - mean);
        }
    }
    return g;
}

struct LossBreakdown {
    double total = 0.0;
    double reconstruction = 0.0;
    double constraint = 0.0;
};

inline LossBreakdown total_loss(const Tensor& x, const Tensor& xhat, const Tensor& z,
                                double alpha, int d) {
    LossBreakdown out;
    out.reconstruction = l_rq(x, xhat);
    out.constraint = l_bc(z, d);
    out.total = out.reconstruction + alpha * out.constraint;
    return out;
}

} // namespace dnajscc

#endif
