#pragma once

#include <vector>

#include "morphkit/nn/autodiff.hpp"

namespace morphkit::nn {

// ---- elementwise ----
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var div(const Var& a, const Var& b);
Var scale(const Var& a, double s);
Var add_scalar(const Var& a, double s);

// ---- matrix ----
Var matmul(const Var& a, const Var& b);      // [m,k] x [k,n] -> [m,n]
Var transpose2d(const Var& a);               // [m,n] -> [n,m]
Var reshape(const Var& a, std::vector<int> shape);
Var linear(const Var& x, const Var& w, const Var& b);  // w[out,in], x[in] -> [out]

// ---- convolution / resampling ----
Var conv2d(const Var& x, const Var& w, const Var& b, int stride, int pad);
Var upsample_nearest2(const Var& x);
Var avg_pool2(const Var& x);
/// Separable valid-region filter with a fixed (non-learned) symmetric kernel;
/// output is [C, H-k+1, W-k+1].
Var filter2d_valid(const Var& x, const std::vector<double>& kernel1d);

// ---- activations / unary ----
Var relu(const Var& a);
Var leaky_relu(const Var& a, double slope);
Var tanh_act(const Var& a);
Var sigmoid_act(const Var& a);
Var log_act(const Var& a);
Var abs_act(const Var& a);
Var square(const Var& a);
Var pow_const(const Var& a, double p);
Var clamp_min(const Var& a, double lo);

// ---- structure ----
Var concat_channels(const std::vector<Var>& xs);        // [Ci,H,W] stacked on C
Var slice_channels(const Var& x, int c0, int c1);       // channels [c0, c1)
Var concat_vec(const std::vector<Var>& xs);             // 1-D concat
Var slice_vec(const Var& x, int i0, int i1);            // 1-D slice [i0, i1)
Var broadcast_mul(const Var& att, const Var& x);        // att[1,H,W] * x[C,H,W]
Var add_rowvec(const Var& x, const Var& b);             // x[m,n] + b[n] per row
Var clamp_range(const Var& a, double lo, double hi);

// ---- reductions ----
Var sum_all(const Var& a);   // -> [1]
Var mean_all(const Var& a);  // -> [1]

// ---- common compositions ----
Var mean_abs_diff(const Var& a, const Var& b);
Var mse(const Var& a, const Var& b);

inline double scalar_of(const Var& v) { return v->value[0]; }

}  // namespace morphkit::nn
