#include "morphkit/nn/adam.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include "morphkit/common/error.hpp"
#include "morphkit/nn/serialize.hpp"

namespace morphkit::nn {

Adam::Adam(const ParamStore& params, double lr, double beta1, double beta2, double eps)
    : params_(params), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    m_.reserve(params.count());
    v_.reserve(params.count());
    for (std::size_t i = 0; i < params.count(); ++i) {
        m_.emplace_back(Tensor::zeros(params.at(i)->value.shape()));
        v_.emplace_back(Tensor::zeros(params.at(i)->value.shape()));
    }
}

void Adam::step() {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < params_.count(); ++i) {
        Node& p = *params_.at(i);
        if (p.grad.empty()) continue;  // parameter untouched this step
        Tensor& m = m_[i];
        Tensor& v = v_[i];
        for (std::int64_t j = 0; j < p.value.size(); ++j) {
            const double g = p.grad[j];
            m[j] = beta1_ * m[j] + (1.0 - beta1_) * g;
            v[j] = beta2_ * v[j] + (1.0 - beta2_) * g * g;
            const double mhat = m[j] / bc1;
            const double vhat = v[j] / bc2;
            p.value[j] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
        }
    }
}

void Adam::save(std::ostream& out) const {
    write_u64(out, static_cast<std::uint64_t>(t_));
    write_u64(out, m_.size());
    for (std::size_t i = 0; i < m_.size(); ++i) {
        write_tensor(out, m_[i]);
        write_tensor(out, v_[i]);
    }
}

void Adam::load(std::istream& in) {
    t_ = static_cast<std::int64_t>(read_u64(in));
    const std::uint64_t n = read_u64(in);
    if (n != m_.size()) throw IoError("Adam::load: state count mismatch");
    for (std::size_t i = 0; i < m_.size(); ++i) {
        m_[i] = read_tensor(in);
        v_[i] = read_tensor(in);
    }
}

}  // namespace morphkit::nn
