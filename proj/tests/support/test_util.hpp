#ifndef DNAJSCC_TESTS_SUPPORT_TEST_UTIL_HPP
#define DNAJSCC_TESTS_SUPPORT_TEST_UTIL_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dnajscc/bio.hpp"
#include "dnajscc/tensor.hpp"

namespace testsupport {

inline dnajscc::Tensor random_tensor(std::vector<int> shape, std::mt19937_64& rng,
                                     double lo = -1.0, double hi = 1.0) {
    dnajscc::Tensor t(std::move(shape));
    std::uniform_real_distribution<double> dist(lo, hi);
    for (double& v : t.data) v = dist(rng);
    return t;
}

// Central-difference derivative of a scalar function with respect to one
// entry of a tensor owned by the caller.
inline double central_diff(std::function<double()> f, double& slot, double h = 1e-5) {
    const double saved = slot;
    slot = saved + h;
    const double up = f();
    slot = saved - h;
    const double down = f();
    slot = saved;
    return (up - down) / (2.0 * h);
}

inline double rel_err(double got, double want) {
    const double denom = std::max({std::abs(got), std::abs(want), 1e-8});
    return std::abs(got - want) / denom;
}

// Direct nested-loop 2-D convolution, deliberately structured unlike the
// im2col/GEMM production path, for cross-checking.
inline dnajscc::Tensor naive_conv2d(const dnajscc::Tensor& x, const dnajscc::Tensor& weight,
                                    const dnajscc::Tensor& bias, int k, int stride, int pad) {
    const int N = x.shape[0], C = x.shape[1], H = x.shape[2], W = x.shape[3];
    const int OC = weight.shape[0];
    const int oh = (H + 2 * pad - k) / stride + 1;
    const int ow = (W + 2 * pad - k) / stride + 1;
    dnajscc::Tensor y({N, OC, oh, ow});
    for (int n = 0; n < N; ++n)
        for (int oc = 0; oc < OC; ++oc)
            for (int oy = 0; oy < oh; ++oy)
                for (int ox = 0; ox < ow; ++ox) {
                    double acc = bias[static_cast<std::size_t>(oc)];
                    for (int c = 0; c < C; ++c)
                        for (int ky = 0; ky < k; ++ky)
                            for (int kx = 0; kx < k; ++kx) {
                                const int sy = oy * stride - pad + ky;
                                const int sx = ox * stride - pad + kx;
                                if (sy < 0 || sy >= H || sx < 0 || sx >= W) continue;
                                acc += x.at4(n, c, sy, sx) *
                                       weight[static_cast<std::size_t>(oc) * C * k * k +
                                              static_cast<std::size_t>(c) * k * k +
                                              static_cast<std::size_t>(ky) * k +
                                              static_cast<std::size_t>(kx)];
                            }
                    y.at4(n, oc, oy, ox) = acc;
                }
    return y;
}

// Independent sequence statistics working on the letter string, written as a
// run-splitting pass rather than incremental accounting.
struct StringBioOracle {
    double gc = 0.0;
    std::size_t longest_run = 0;
    double frac_long_runs = 0.0; // nucleotides in runs longer than 5

    explicit StringBioOracle(const std::string& letters) {
        if (letters.empty()) return;
        std::size_t gc_count = 0;
        for (char ch : letters)
            if (ch == 'C' || ch == 'G') ++gc_count;
        gc = static_cast<double>(gc_count) / static_cast<double>(letters.size());

        std::vector<std::size_t> runs;
        std::size_t start = 0;
        for (std::size_t i = 1; i <= letters.size(); ++i) {
            if (i == letters.size() || letters[i] != letters[start]) {
                runs.push_back(i - start);
                start = i;
            }
        }
        std::size_t covered = 0;
        for (std::size_t len : runs) {
            longest_run = std::max(longest_run, len);
            if (len > 5) covered += len;
        }
        frac_long_runs = static_cast<double>(covered) / static_cast<double>(letters.size());
    }
};

inline std::string bases_to_string(const dnajscc::NucleotideSequence& seq) {
    std::string s;
    for (auto b : seq) s.push_back(dnajscc::kBaseChars[b]);
    return s;
}

} // namespace testsupport

#endif
