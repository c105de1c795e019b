#pragma once

#include "morphkit/nn/ops.hpp"

namespace morphkit::gib {

/// Complete bipartite landmark graph over 2V nodes (V per landmark set,
/// zero within-set edges). Degrees are all V, so the symmetric
/// degree-normalized adjacency has every cross-set entry equal to 1/V and
/// every row summing to 1.
struct BipartiteGraph {
    int nodes_per_set = 0;
    nn::Tensor adjacency;  // [2V, 2V] normalized

    static BipartiteGraph complete(int nodes_per_set);
};

/// One graph-convolution layer X' = act(A_hat X W + b) with optional ReLU.
nn::Var gcn_layer(const nn::Var& x, const nn::Var& adjacency, const nn::Var& w, const nn::Var& b,
                  bool apply_relu);

}  // namespace morphkit::gib
