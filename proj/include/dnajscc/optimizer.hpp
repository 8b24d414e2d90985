#ifndef DNAJSCC_OPTIMIZER_HPP
#define DNAJSCC_OPTIMIZER_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dnajscc/layers.hpp"

namespace dnajscc {

// Adam with the usual defaults and bias correction. Slot order is fixed by
// the parameter registry, so state stays aligned across steps.
class Adam {
  public:
    explicit Adam(std::vector<Param*> params, double beta1 = 0.9, double beta2 = 0.999,
                  double eps = 1e-8)
        : params_(std::move(params)), beta1_(beta1), beta2_(beta2), eps_(eps) {
        m_.resize(params_.size());
        v_.resize(params_.size());
        for (std::size_t i = 0; i < params_.size(); ++i) {
            m_[i].assign(params_[i]->value.data.size(), 0.0);
            v_[i].assign(params_[i]->value.data.size(), 0.0);
        }
    }

    void zero_grad() {
        for (Param* p : params_) std::fill(p->grad.data.begin(), p->grad.data.end(), 0.0);
    }

    void step(double lr) {
        ++t_;
        const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
        const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
        for (std::size_t i = 0; i < params_.size(); ++i) {
            Param& p = *params_[i];
            if (p.grad.data.size() != m_[i].size())
                throw std::runtime_error("Adam: gradient size changed for " + p.name);
            for (std::size_t j = 0; j < m_[i].size(); ++j) {
                const double g = p.grad.data[j];
                m_[i][j] = beta1_ * m_[i][j] + (1.0 - beta1_) * g;
                v_[i][j] = beta2_ * v_[i][j] + (1.0 - beta2_) * g * g;
                const double mhat = m_[i][j] / bc1;
                const double vhat = v_[i][j] / bc2;
                p.value.data[j] -= lr * mhat / (std::sqrt(vhat) + eps_);
            }
        }
    }

    std::uint64_t steps_taken() const { return t_; }

  private:
    std::vector<Param*> params_;
    double beta1_, beta2_, eps_;
    std::uint64_t t_ = 0;
    std::vector<std::vector<double>> m_;
    std::vector<std::vector<double>> v_;
};

// Piecewise-constant schedule: the initial rate for the first half of
// training, the final rate afterwards.
inline double lr_schedule(std::uint64_t iteration, std::uint64_t total_iterations,
                          double initial = 5e-3, double final = 5e-4) {
    return iteration < (total_iterations + 1) / 2 ? initial : final;
}

} // namespace dnajscc

#endif
