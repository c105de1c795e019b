#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace morphkit::nn {

/// Dense row-major tensor of doubles. Shapes used throughout the project:
///   {n}        vectors (flattened landmarks, codes)
///   {r, c}     matrices (weights, node features)
///   {c, h, w}  feature maps and images
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<int> shape);
    Tensor(std::vector<int> shape, std::vector<double> data);

    static Tensor zeros(std::vector<int> shape) { return Tensor(std::move(shape)); }
    static Tensor full(std::vector<int> shape, double v);
    static Tensor scalar(double v) { return Tensor({1}, {v}); }

    const std::vector<int>& shape() const { return shape_; }
    int dim(int i) const { return shape_[static_cast<std::size_t>(i)]; }
    int rank() const { return static_cast<int>(shape_.size()); }
    std::int64_t size() const { return static_cast<std::int64_t>(data_.size()); }
    bool empty() const { return data_.empty(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& vec() { return data_; }
    const std::vector<double>& vec() const { return data_; }

    double& operator[](std::int64_t i) { return data_[static_cast<std::size_t>(i)]; }
    double operator[](std::int64_t i) const { return data_[static_cast<std::size_t>(i)]; }

    // 2-D / 3-D accessors (no bounds checks in release builds)
    double& at(int i, int j) { return data_[static_cast<std::size_t>(i) * shape_[1] + j]; }
    double at(int i, int j) const { return data_[static_cast<std::size_t>(i) * shape_[1] + j]; }
    double& at(int c, int y, int x) {
        return data_[(static_cast<std::size_t>(c) * shape_[1] + y) * shape_[2] + x];
    }
    double at(int c, int y, int x) const {
        return data_[(static_cast<std::size_t>(c) * shape_[1] + y) * shape_[2] + x];
    }

    void fill(double v);
    bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }
    bool all_finite() const;

    /// Returns a copy with a new shape of identical element count.
    Tensor reshaped(std::vector<int> shape) const;

private:
    std::vector<int> shape_;
    std::vector<double> data_;
};

std::int64_t shape_numel(const std::vector<int>& shape);

}  // namespace morphkit::nn
