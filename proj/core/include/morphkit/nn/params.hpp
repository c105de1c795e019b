#pragma once

#include <string>
#include <vector>

#include "morphkit/common/rng.hpp"
#include "morphkit/nn/autodiff.hpp"

namespace morphkit::nn {

/// Ordered collection of named trainable leaves. Order is insertion order
/// and defines both the optimizer update order and the serialization layout.
class ParamStore {
public:
    Var add(const std::string& name, Tensor init);
    Var get(const std::string& name) const;
    bool has(const std::string& name) const;

    std::size_t count() const { return items_.size(); }
    const std::string& name(std::size_t i) const { return items_[i].name; }
    const Var& at(std::size_t i) const { return items_[i].var; }

    std::vector<Var> vars() const;
    void zero_grads() const;

    /// Total number of scalar parameters.
    std::int64_t scalar_count() const;

private:
    struct Item {
        std::string name;
        Var var;
    };
    std::vector<Item> items_;
};

// ---- weight initializers ----
Tensor init_uniform(std::vector<int> shape, Rng& rng, double scale);
Tensor init_xavier(std::vector<int> shape, Rng& rng);  // fan from first two dims
Tensor init_conv(std::vector<int> shape, Rng& rng);    // [Co,Ci,kh,kw]

}  // namespace morphkit::nn
