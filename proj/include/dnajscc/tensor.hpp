#ifndef DNAJSCC_TENSOR_HPP
#define DNAJSCC_TENSOR_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dnajscc {

using MatX = Eigen::MatrixXd;
using MatMap = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using ConstMatMap = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

// Dense row-major tensor of doubles. Activations use (N,C,H,W), flat vectors (N,K).
struct Tensor {
    std::vector<int> shape;
    std::vector<double> data;

    Tensor() = default;
    explicit Tensor(std::vector<int> s) : shape(std::move(s)), data(numel_of(shape), 0.0) {}

    static std::size_t numel_of(const std::vector<int>& s) {
        std::size_t n = 1;
        for (int d : s) {
            if (d < 0) throw std::invalid_argument("Tensor: negative dimension");
            n *= static_cast<std::size_t>(d);
        }
        return n;
    }

    std::size_t numel() const { return data.size(); }
    int dim(int i) const { return shape.at(static_cast<std::size_t>(i)); }

    void zero() { std::fill(data.begin(), data.end(), 0.0); }
    void fill(double v) { std::fill(data.begin(), data.end(), v); }

    void reshape(std::vector<int> s) {
        if (numel_of(s) != data.size()) throw std::invalid_argument("Tensor::reshape: element count mismatch");
        shape = std::move(s);
    }

    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }

    // NCHW accessors
    double& at4(int n, int c, int y, int x) {
        return data[((static_cast<std::size_t>(n) * shape[1] + c) * shape[2] + y) * shape[3] + x];
    }
    double at4(int n, int c, int y, int x) const {
        return data[((static_cast<std::size_t>(n) * shape[1] + c) * shape[2] + y) * shape[3] + x];
    }
    double& at2(int n, int k) { return data[static_cast<std::size_t>(n) * shape[1] + k]; }
    double at2(int n, int k) const { return data[static_cast<std::size_t>(n) * shape[1] + k]; }

    // View as rows x cols (row-major), must match numel.
    MatMap mat(int rows, int cols) {
        if (static_cast<std::size_t>(rows) * cols != data.size())
            throw std::invalid_argument("Tensor::mat: shape mismatch");
        return MatMap(data.data(), rows, cols);
    }
    ConstMatMap mat(int rows, int cols) const {
        if (static_cast<std::size_t>(rows) * cols != data.size())
            throw std::invalid_argument("Tensor::mat: shape mismatch");
        return ConstMatMap(data.data(), rows, cols);
    }

    bool same_shape(const Tensor& o) const { return shape == o.shape; }
};

inline std::string shape_str(const std::vector<int>& s) {
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out += std::to_string(s[i]);
        if (i + 1 < s.size()) out += ",";
    }
    return out + ")";
}

} // namespace dnajscc

#endif
