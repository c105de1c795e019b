#include "morphkit/gib/graph.hpp"

#include "morphkit/common/error.hpp"

namespace morphkit::gib {

BipartiteGraph BipartiteGraph::complete(int nodes_per_set) {
    if (nodes_per_set <= 0) throw ConfigError("BipartiteGraph: need at least one node per set");
    const int v = nodes_per_set;
    BipartiteGraph g;
    g.nodes_per_set = v;
    g.adjacency = nn::Tensor({2 * v, 2 * v});
    const double w = 1.0 / static_cast<double>(v);
    for (int i = 0; i < v; ++i) {
        for (int j = 0; j < v; ++j) {
            g.adjacency.at(i, v + j) = w;
            g.adjacency.at(v + i, j) = w;
        }
    }
    return g;
}

nn::Var gcn_layer(const nn::Var& x, const nn::Var& adjacency, const nn::Var& w, const nn::Var& b,
                  bool apply_relu) {
    using namespace nn;
    const Var mixed = matmul(adjacency, x);
    const Var projected = add_rowvec(matmul(mixed, w), b);
    return apply_relu ? relu(projected) : projected;
}

}  // namespace morphkit::gib
