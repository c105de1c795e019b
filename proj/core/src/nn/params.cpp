#include "morphkit/nn/params.hpp"

#include <cmath>

#include "morphkit/common/error.hpp"

namespace morphkit::nn {

Var ParamStore::add(const std::string& name, Tensor init) {
    if (has(name)) throw Error("ParamStore: duplicate parameter name: " + name);
    Var v = leaf(std::move(init), true);
    items_.push_back({name, v});
    return v;
}

Var ParamStore::get(const std::string& name) const {
    for (const auto& it : items_)
        if (it.name == name) return it.var;
    throw Error("ParamStore: unknown parameter: " + name);
}

bool ParamStore::has(const std::string& name) const {
    for (const auto& it : items_)
        if (it.name == name) return true;
    return false;
}

std::vector<Var> ParamStore::vars() const {
    std::vector<Var> out;
    out.reserve(items_.size());
    for (const auto& it : items_) out.push_back(it.var);
    return out;
}

void ParamStore::zero_grads() const {
    for (const auto& it : items_)
        if (!it.var->grad.empty()) it.var->grad.fill(0.0);
}

std::int64_t ParamStore::scalar_count() const {
    std::int64_t n = 0;
    for (const auto& it : items_) n += it.var->value.size();
    return n;
}

Tensor init_uniform(std::vector<int> shape, Rng& rng, double scale) {
    Tensor t(std::move(shape));
    for (std::int64_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-scale, scale);
    return t;
}

Tensor init_xavier(std::vector<int> shape, Rng& rng) {
    const int fan_out = shape[0];
    const int fan_in = shape.size() > 1 ? shape[1] : shape[0];
    const double s = std::sqrt(6.0 / (fan_in + fan_out));
    return init_uniform(std::move(shape), rng, s);
}

Tensor init_conv(std::vector<int> shape, Rng& rng) {
    // shape = [Co, Ci, kh, kw]
    const double fan_in = static_cast<double>(shape[1]) * shape[2] * shape[3];
    const double s = std::sqrt(3.0 / fan_in);
    return init_uniform(std::move(shape), rng, s);
}

}  // namespace morphkit::nn
