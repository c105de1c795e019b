#include "morphkit/nn/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "morphkit/common/error.hpp"

namespace morphkit::nn {

std::int64_t shape_numel(const std::vector<int>& shape) {
    std::int64_t n = 1;
    for (int d : shape) n *= d;
    return n;
}

Tensor::Tensor(std::vector<int> shape)
    : shape_(std::move(shape)), data_(static_cast<std::size_t>(shape_numel(shape_)), 0.0) {}

Tensor::Tensor(std::vector<int> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (shape_numel(shape_) != static_cast<std::int64_t>(data_.size()))
        throw DimensionError("Tensor: shape does not match data length");
}

Tensor Tensor::full(std::vector<int> shape, double v) {
    Tensor t(std::move(shape));
    t.fill(v);
    return t;
}

void Tensor::fill(double v) {
    std::fill(data_.begin(), data_.end(), v);
}

bool Tensor::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

Tensor Tensor::reshaped(std::vector<int> shape) const {
    if (shape_numel(shape) != size())
        throw DimensionError("Tensor::reshaped: element count mismatch");
    return Tensor(std::move(shape), data_);
}

}  // namespace morphkit::nn
