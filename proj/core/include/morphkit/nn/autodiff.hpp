#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "morphkit/nn/tensor.hpp"

namespace morphkit::nn {

class Node;
using Var = std::shared_ptr<Node>;

/// One value in a define-by-run computation graph. Graphs are rebuilt every
/// training step; parameters are long-lived leaves whose `value` the
/// optimizer updates in place.
class Node {
public:
    Tensor value;
    Tensor grad;  // allocated lazily by backward()
    bool requires_grad = false;
    std::vector<Var> parents;
    // Reads this->grad and accumulates into parents' grads.
    std::function<void(Node&)> backward_fn;
    std::uint64_t id = 0;  // creation order; fixes backward scheduling

    void ensure_grad() {
        if (grad.empty()) grad = Tensor::zeros(value.shape());
    }
};

/// Leaf that gradients flow into (parameters, probed inputs).
Var leaf(Tensor value, bool requires_grad = true);

/// Leaf excluded from differentiation (inputs, fixed kernels).
Var constant(Tensor value);

/// Reverse-mode sweep from a scalar root. Deterministic: nodes run in
/// strictly decreasing creation order, so identical graphs give bit-identical
/// gradients.
void backward(const Var& root);

/// Resets gradient buffers on the given leaves (optimizer calls this).
void zero_grad(const std::vector<Var>& leaves);

namespace detail {
Var make_op(Tensor value, std::vector<Var> parents, std::function<void(Node&)> fn);
}

}  // namespace morphkit::nn
