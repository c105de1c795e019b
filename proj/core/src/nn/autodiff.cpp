#include "morphkit/nn/autodiff.hpp"

#include <algorithm>
#include <atomic>
#include <unordered_set>

#include "morphkit/common/error.hpp"

namespace morphkit::nn {

namespace {
std::atomic<std::uint64_t> g_next_id{1};
}

Var leaf(Tensor value, bool requires_grad) {
    auto n = std::make_shared<Node>();
    n->value = std::move(value);
    n->requires_grad = requires_grad;
    n->id = g_next_id.fetch_add(1);
    return n;
}

Var constant(Tensor value) {
    return leaf(std::move(value), false);
}

namespace detail {
Var make_op(Tensor value, std::vector<Var> parents, std::function<void(Node&)> fn) {
    auto n = std::make_shared<Node>();
    n->value = std::move(value);
    n->parents = std::move(parents);
    n->id = g_next_id.fetch_add(1);
    for (const auto& p : n->parents) {
        if (p->requires_grad) {
            n->requires_grad = true;
            break;
        }
    }
    if (n->requires_grad) n->backward_fn = std::move(fn);
    return n;
}
}  // namespace detail

void backward(const Var& root) {
    if (root->value.size() != 1)
        throw DimensionError("backward: root must be a scalar");

    // Collect the reachable subgraph, then sweep in decreasing id order.
    std::vector<Node*> order;
    std::unordered_set<Node*> seen;
    std::vector<Node*> stack{root.get()};
    seen.insert(root.get());
    while (!stack.empty()) {
        Node* n = stack.back();
        stack.pop_back();
        order.push_back(n);
        for (const auto& p : n->parents) {
            if (p->requires_grad && seen.insert(p.get()).second) stack.push_back(p.get());
        }
    }
    std::sort(order.begin(), order.end(),
              [](const Node* a, const Node* b) { return a->id > b->id; });

    for (Node* n : order) {
        n->ensure_grad();
        n->grad.fill(0.0);
    }
    root->grad.fill(1.0);
    for (Node* n : order) {
        if (n->backward_fn) n->backward_fn(*n);
    }
}

void zero_grad(const std::vector<Var>& leaves) {
    for (const auto& l : leaves) {
        if (!l->grad.empty()) l->grad.fill(0.0);
    }
}

}  // namespace morphkit::nn
