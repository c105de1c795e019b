#pragma once

#include <iosfwd>

#include "morphkit/nn/params.hpp"

namespace morphkit::nn {

/// Adam optimizer (Kingma & Ba) over a ParamStore. Moment buffers are part
/// of checkpoint state so that resumed runs continue bit-exactly.
class Adam {
public:
    Adam(const ParamStore& params, double lr, double beta1 = 0.9, double beta2 = 0.999,
         double eps = 1e-8);

    void step();
    std::int64_t steps_taken() const { return t_; }
    double learning_rate() const { return lr_; }

    void save(std::ostream& out) const;
    void load(std::istream& in);

private:
    const ParamStore& params_;
    double lr_, beta1_, beta2_, eps_;
    std::int64_t t_ = 0;
    std::vector<Tensor> m_, v_;
};

}  // namespace morphkit::nn
