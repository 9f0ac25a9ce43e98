#pragma once

#include "bpsgcn/params.hpp"

#include <vector>

namespace bpsgcn {

/// Adam with fixed step size. State is positional, so the parameter set must
/// not change between steps.
class Adam {
public:
    explicit Adam(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

    void step(ParamStore& params) {
        if (m_.empty()) {
            m_.resize(params.size());
            v_.resize(params.size());
            for (std::size_t i = 0; i < params.size(); ++i) {
                m_[i].setZero(params[i].value.rows(), params[i].value.cols());
                v_[i].setZero(params[i].value.rows(), params[i].value.cols());
            }
        }
        if (m_.size() != params.size()) throw ArgumentError("Adam: parameter set changed");
        ++t_;
        const double bc1 = 1.0 - std::pow(beta1_, t_);
        const double bc2 = 1.0 - std::pow(beta2_, t_);
        for (std::size_t i = 0; i < params.size(); ++i) {
            Param& p = params[i];
            m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * p.grad;
            v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * p.grad.cwiseProduct(p.grad);
            const ad::Mat mhat = m_[i] / bc1;
            const ad::Mat vhat = v_[i] / bc2;
            p.value -= lr_ * mhat.cwiseQuotient((vhat.array().sqrt() + eps_).matrix());
        }
    }

    double lr() const { return lr_; }
    void set_lr(double lr) { lr_ = lr; }

private:
    double lr_, beta1_, beta2_, eps_;
    long t_ = 0;
    std::vector<ad::Mat> m_, v_;
};

} // namespace bpsgcn
