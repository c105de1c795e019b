#include "morphkit/nn/ops.hpp"

#include <cmath>

#include "morphkit/common/error.hpp"

namespace morphkit::nn {

using detail::make_op;

namespace {

void check_same_shape(const Var& a, const Var& b, const char* op) {
    if (!a->value.same_shape(b->value))
        throw DimensionError(std::string(op) + ": shape mismatch");
}

void accumulate(Node& p, const Tensor& g) {
    if (!p.requires_grad) return;
    p.ensure_grad();
    double* dst = p.grad.data();
    const double* src = g.data();
    const std::int64_t n = g.size();
    for (std::int64_t i = 0; i < n; ++i) dst[i] += src[i];
}

}  // namespace

Var add(const Var& a, const Var& b) {
    check_same_shape(a, b, "add");
    Tensor out = a->value;
    const std::int64_t n = out.size();
    for (std::int64_t i = 0; i < n; ++i) out[i] += b->value[i];
    return make_op(std::move(out), {a, b}, [](Node& self) {
        accumulate(*self.parents[0], self.grad);
        accumulate(*self.parents[1], self.grad);
    });
}

Var sub(const Var& a, const Var& b) {
    check_same_shape(a, b, "sub");
    Tensor out = a->value;
    const std::int64_t n = out.size();
    for (std::int64_t i = 0; i < n; ++i) out[i] -= b->value[i];
    return make_op(std::move(out), {a, b}, [](Node& self) {
        accumulate(*self.parents[0], self.grad);
        Node& p = *self.parents[1];
        if (!p.requires_grad) return;
        p.ensure_grad();
        for (std::int64_t i = 0; i < self.grad.size(); ++i) p.grad[i] -= self.grad[i];
    });
}

Var mul(const Var& a, const Var& b) {
    check_same_shape(a, b, "mul");
    Tensor out = a->value;
    const std::int64_t n = out.size();
    for (std::int64_t i = 0; i < n; ++i) out[i] *= b->value[i];
    return make_op(std::move(out), {a, b}, [](Node& self) {
        Node& pa = *self.parents[0];
        Node& pb = *self.parents[1];
        const std::int64_t n = self.grad.size();
        if (pa.requires_grad) {
            pa.ensure_grad();
            for (std::int64_t i = 0; i < n; ++i) pa.grad[i] += self.grad[i] * pb.value[i];
        }
        if (pb.requires_grad) {
            pb.ensure_grad();
            for (std::int64_t i = 0; i < n; ++i) pb.grad[i] += self.grad[i] * pa.value[i];
        }
    });
}

Var div(const Var& a, const Var& b) {
    check_same_shape(a, b, "div");
    Tensor out = a->value;
    const std::int64_t n = out.size();
    for (std::int64_t i = 0; i < n; ++i) out[i] /= b->value[i];
    return make_op(std::move(out), {a, b}, [](Node& self) {
        Node& pa = *self.parents[0];
        Node& pb = *self.parents[1];
        const std::int64_t n = self.grad.size();
        if (pa.requires_grad) {
            pa.ensure_grad();
            for (std::int64_t i = 0; i < n; ++i) pa.grad[i] += self.grad[i] / pb.value[i];
        }
        if (pb.requires_grad) {
            pb.ensure_grad();
            for (std::int64_t i = 0; i < n; ++i) {
                const double bv = pb.value[i];
                pb.grad[i] -= self.grad[i] * pa.value[i] / (bv * bv);
            }
        }
    });
}

Var scale(const Var& a, double s) {
    Tensor out = a->value;
    for (std::int64_t i = 0; i < out.size(); ++i) out[i] *= s;
    return make_op(std::move(out), {a}, [s](Node& self) {
        Node& p = *self.parents[0];
        if (!p.requires_grad) return;
        p.ensure_grad();
        for (std::int64_t i = 0; i < self.grad.size(); ++i) p.grad[i] += s * self.grad[i];
    });
}

Var add_scalar(const Var& a, double s) {
    Tensor out = a->value;
    for (std::int64_t i = 0; i < out.size(); ++i) out[i] += s;
    return make_op(std::move(out), {a}, [](Node& self) {
        accumulate(*self.parents[0], self.grad);
    });
}

Var matmul(const Var& a, const Var& b) {
    const Tensor& A = a->value;
    const Tensor& B = b->value;
    if (A.rank() != 2 || B.rank() != 2 || A.dim(1) != B.dim(0))
        throw DimensionError("matmul: incompatible shapes");
    const int m = A.dim(0), k = A.dim(1), n = B.dim(1);
    Tensor out({m, n});
    for (int i = 0; i < m; ++i) {
        const double* arow = A.data() + std::size_t(i) * k;
        double* orow = out.data() + std::size_t(i) * n;
        for (int kk = 0; kk < k; ++kk) {
            const double av = arow[kk];
            if (av == 0.0) continue;
            const double* brow = B.data() + std::size_t(kk) * n;
            for (int j = 0; j < n; ++j) orow[j] += av * brow[j];
        }
    }
    return make_op(std::move(out), {a, b}, [m, k, n](Node& self) {
        Node& pa = *self.parents[0];
        Node& pb = *self.parents[1];
        const Tensor& G = self.grad;
        if (pa.requires_grad) {
            pa.ensure_grad();  // dA = G * B^T
            const Tensor& B = pb.value;
            for (int i = 0; i < m; ++i) {
                const double* grow = G.data() + std::size_t(i) * n;
                double* darow = pa.grad.data() + std::size_t(i) * k;
                for (int kk = 0; kk < k; ++kk) {
                    const double* brow = B.data() + std::size_t(kk) * n;
                    double acc = 0.0;
                    for (int j = 0; j < n; ++j) acc += grow[j] * brow[j];
                    darow[kk] += acc;
                }
            }
        }
        if (pb.requires_grad) {
            pb.ensure_grad();  // dB = A^T * G
            const Tensor& A = pa.value;
            for (int kk = 0; kk < k; ++kk) {
                double* dbrow = pb.grad.data() + std::size_t(kk) * n;
                for (int i = 0; i < m; ++i) {
                    const double av = A.data()[std::size_t(i) * k + kk];
                    if (av == 0.0) continue;
                    const double* grow = G.data() + std::size_t(i) * n;
                    for (int j = 0; j < n; ++j) dbrow[j] += av * grow[j];
                }
            }
        }
    });
}

Var transpose2d(const Var& a) {
    const Tensor& A = a->value;
    if (A.rank() != 2) throw DimensionError("transpose2d: rank-2 tensor required");
    const int m = A.dim(0), n = A.dim(1);
    Tensor out({n, m});
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) out.at(j, i) = A.at(i, j);
    return make_op(std::move(out), {a}, [m, n](Node& self) {
        Node& p = *self.parents[0];
        if (!p.requires_grad) return;
        p.ensure_grad();
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) p.grad.at(i, j) += self.grad.at(j, i);
    });
}

Var reshape(const Var& a, std::vector<int> shape) {
    Tensor out = a->value.reshaped(std::move(shape));
    return make_op(std::move(out), {a}, [](Node& self) {
        Node& p = *self.parents[0];
        if (!p.requires_grad) return;
        p.ensure_grad();
        for (std::int64_t i = 0; i < self.grad.size(); ++i) p.grad[i] += self.grad[i];
    });
}

Var linear(const Var& x, const Var& w, const Var& b) {
    const Tensor& X = x->value;
    const Tensor& W = w->value;
    const Tensor& B = b->value;
    if (W.rank() != 2 || X.rank() != 1 || W.dim(1) != X.dim(0) || B.dim(0) != W.dim(0))
        throw DimensionError("linear: incompatible shapes");
    const int out_n = W.dim(0), in_n = W.dim(1);
    Tensor out({out_n});
    for (int o = 0; o < out_n; ++o) {
        const double* wrow = W.data() + std::size_t(o) * in_n;
        double acc = B[o];
        for (int i = 0; i < in_n; ++i) acc += wrow[i] * X[i];
        out[o] = acc;
    }
    return make_op(std::move(out), {x, w, b}, [out_n, in_n](Node& self) {
        Node& px = *self.parents[0];
        Node& pw = *self.parents[1];
        Node& pb = *self.parents[2];
        const Tensor& G = self.grad;
        if (px.requires_grad) {
            px.ensure_grad();
            for (int o = 0; o < out_n; ++o) {
                const double g = G[o];
                if (g == 0.0) continue;
                const double* wrow = pw.value.data() + std::size_t(o) * in_n;
                for (int i = 0; i < in_n; ++i) px.grad[i] += g * wrow[i];
            }
        }
        if (pw.requires_grad) {
            pw.ensure_grad();
            for (int o = 0; o < out_n; ++o) {
                const double g = G[o];
                if (g == 0.0) continue;
                double* dwrow = pw.grad.data() + std::size_t(o) * in_n;
                for (int i = 0; i < in_n; ++i) dwrow[i] += g * px.value[i];
            }
        }
        if (pb.requires_grad) {
            pb.ensure_grad();
            for (int o = 0; o < out_n; ++o) pb.grad[o] += G[o];
        }
    });
}

namespace {

// valid output range for one kernel tap: lo <= o <= hi keeps the input
// coordinate o*stride - pad + k inside [0, extent)
inline void tap_range(int k, int stride, int pad, int extent, int out_extent, int& lo, int& hi) {
    const int num = pad - k;
    lo = num > 0 ? (num + stride - 1) / stride : 0;
    const int hi_num = extent - 1 + pad - k;
    hi = hi_num >= 0 ? std::min(out_extent - 1, hi_num / stride) : -1;
}

}  // namespace

Var conv2d(const Var& x, const Var& w, const Var& b, int stride, int pad) {
    const Tensor& X = x->value;
    const Tensor& W = w->value;
    if (X.rank() != 3 || W.rank() != 4 || W.dim(1) != X.dim(0))
        throw DimensionError("conv2d: incompatible shapes");
    const int ci = X.dim(0), h = X.dim(1), wd = X.dim(2);
    const int co = W.dim(0), kh = W.dim(2), kw = W.dim(3);
    const int ho = (h + 2 * pad - kh) / stride + 1;
    const int wo = (wd + 2 * pad - kw) / stride + 1;
    if (ho <= 0 || wo <= 0) throw DimensionError("conv2d: output would be empty");

    Tensor out({co, ho, wo});
    for (int oc = 0; oc < co; ++oc) {
        double* ochan = out.data() + std::size_t(oc) * ho * wo;
        const double bias = b->value[oc];
        for (std::int64_t i = 0; i < std::int64_t(ho) * wo; ++i) ochan[i] = bias;
        for (int ic = 0; ic < ci; ++ic) {
            const double* xch = X.data() + std::size_t(ic) * h * wd;
            const double* wk = W.data() + ((std::size_t(oc) * ci + ic) * kh) * kw;
            for (int ky = 0; ky < kh; ++ky) {
                int oy_lo, oy_hi;
                tap_range(ky, stride, pad, h, ho, oy_lo, oy_hi);
                for (int kx = 0; kx < kw; ++kx) {
                    const double wv = wk[std::size_t(ky) * kw + kx];
                    if (wv == 0.0) continue;
                    int ox_lo, ox_hi;
                    tap_range(kx, stride, pad, wd, wo, ox_lo, ox_hi);
                    for (int oy = oy_lo; oy <= oy_hi; ++oy) {
                        const double* xrow = xch + std::size_t(oy * stride - pad + ky) * wd +
                                             (ox_lo * stride - pad + kx);
                        double* orow = ochan + std::size_t(oy) * wo + ox_lo;
                        const int n = ox_hi - ox_lo;
                        for (int i = 0; i <= n; ++i) orow[i] += wv * xrow[std::size_t(i) * stride];
                    }
                }
            }
        }
    }

    return make_op(std::move(out), {x, w, b},
                   [ci, h, wd, co, kh, kw, ho, wo, stride, pad](Node& self) {
        Node& px = *self.parents[0];
        Node& pw = *self.parents[1];
        Node& pb = *self.parents[2];
        const Tensor& G = self.grad;
        const bool need_x = px.requires_grad;
        const bool need_w = pw.requires_grad;
        if (need_x) px.ensure_grad();
        if (need_w) pw.ensure_grad();
        if (pb.requires_grad) {
            pb.ensure_grad();
            for (int oc = 0; oc < co; ++oc) {
                const double* gch = G.data() + std::size_t(oc) * ho * wo;
                double acc = 0.0;
                for (std::int64_t i = 0; i < std::int64_t(ho) * wo; ++i) acc += gch[i];
                pb.grad[oc] += acc;
            }
        }
        if (!need_x && !need_w) return;
        for (int oc = 0; oc < co; ++oc) {
            const double* gch = G.data() + std::size_t(oc) * ho * wo;
            for (int ic = 0; ic < ci; ++ic) {
                const std::size_t xoff = std::size_t(ic) * h * wd;
                const std::size_t woff = ((std::size_t(oc) * ci + ic) * kh) * kw;
                for (int ky = 0; ky < kh; ++ky) {
                    int oy_lo, oy_hi;
                    tap_range(ky, stride, pad, h, ho, oy_lo, oy_hi);
                    for (int kx = 0; kx < kw; ++kx) {
                        int ox_lo, ox_hi;
                        tap_range(kx, stride, pad, wd, wo, ox_lo, ox_hi);
                        const std::size_t wi = woff + std::size_t(ky) * kw + kx;
                        const double wv = pw.value[static_cast<std::int64_t>(wi)];
                        double dw_acc = 0.0;
                        for (int oy = oy_lo; oy <= oy_hi; ++oy) {
                            const std::size_t row = xoff + std::size_t(oy * stride - pad + ky) * wd +
                                                    (ox_lo * stride - pad + kx);
                            const double* grow = gch + std::size_t(oy) * wo + ox_lo;
                            const int n = ox_hi - ox_lo;
                            if (need_x && need_w) {
                                double* dxrow = px.grad.data() + row;
                                const double* xrow = px.value.data() + row;
                                for (int i = 0; i <= n; ++i) {
                                    const double g = grow[i];
                                    dw_acc += g * xrow[std::size_t(i) * stride];
                                    dxrow[std::size_t(i) * stride] += g * wv;
                                }
                            } else if (need_w) {
                                const double* xrow = px.value.data() + row;
                                for (int i = 0; i <= n; ++i)
                                    dw_acc += grow[i] * xrow[std::size_t(i) * stride];
                            } else {
                                double* dxrow = px.grad.data() + row;
                                for (int i = 0; i <= n; ++i)
                                    dxrow[std::size_t(i) * stride] += grow[i] * wv;
                            }
                        }
                        if (need_w) pw.grad[static_cast<std::int64_t>(wi)] += dw_acc;
                    }
                }
            }
        }
    });
}

Var upsample_nearest2(const Var& x) {
    const Tensor& X = x->value;
    if (X.rank() != 3) throw DimensionError("upsample_nearest2: rank-3 tensor required");
    const int c = X.dim(0), h = X.dim(1), w = X.dim(2);
    Tensor out({c, 2 * h, 2 * w});
    for (int ic = 0; ic < c; ++ic)
        for (int y = 0; y < 2 * h; ++y)
            for (int xx = 0; xx < 2 * w; ++xx)
                out.at(ic, y, xx) = X.at(ic, y / 2, xx / 2);
    return make_op(std::move(out), {x}, [c, h, w](Node& self) {
        Node& p = *self.parents[0];
        if (!p.requires_grad) return;
        p.ensure_grad();
        for (int ic = 0; ic < c; ++ic)
            for (int y = 0; y < 2 * h; ++y)
                for (int xx = 0; xx < 2 * w; ++xx)
                    p.grad.at(ic, y / 2, xx / 2) += self.grad.at(ic, y, xx);
    });
}

Var avg_pool2(const Var& x) {
    const Tensor& X = x->value;
    if (X.rank() != 3) throw DimensionError("avg_pool2: rank-3 tensor required");
    const int c = X.dim(0), h = X.dim(1) / 2, w = X.dim(2) / 2;
    Tensor out({c, h, w});
    for (int ic = 0; ic < c; ++ic)
        for (int y = 0; y < h; ++y)
            for (int xx = 0; xx < w; ++xx)
                out.at(ic, y, xx) = 0.25 * (X.at(ic, 2 * y, 2 * xx) + X.at(ic, 2 * y, 2 * xx + 1) +
                                            X.at(ic, 2 * y + 1, 2 * xx) + X.at(ic, 2 * y + 1, 2 * xx + 1));
    return make_op(std::move(out), {x}, [c, h, w](Node& self) {
        Node& p = *self.parents[0];
        if (!p.requires_grad) return;
        p.ensure_grad();
        for (int ic = 0; ic < c; ++ic)
            for (int y = 0; y < h; ++y)
                for (int xx = 0; xx < w; ++xx) {
                    const double g = 0.25 * self.grad.at(ic, y, xx);
                    p.grad.at(ic, 2 * y, 2 * xx) += g;
                    p.grad.at(ic, 2 * y, 2 * xx + 1) += g;
                    p.grad.at(ic, 2 * y + 1, 2 * xx) += g;
                    p.grad.at(ic, 2 * y + 1, 2 * xx + 1) += g;
                }
    });
}

Var filter2d_valid(const Var& x, const std::vector<double>& kernel1d) {
    const Tensor& X = x->value;
    if (X.rank() != 3) throw DimensionError("filter2d_valid: rank-3 tensor required");
    const int c = X.dim(0), h = X.dim(1), w = X.dim(2);
    const int k = static_cast<int>(kernel1d.size());
    const int ho = h - k + 1, wo = w - k + 1;
    if (ho <= 0 || wo <= 0) throw DimensionError("filter2d_valid: kernel larger than image");

    // horizontal pass then vertical pass
    Tensor tmp({c, h, wo});
    for (int ic = 0; ic < c; ++ic)
        for (int y = 0; y < h; ++y)
            for (int ox = 0; ox < wo; ++ox) {
                double acc = 0.0;
                for (int i = 0; i < k; ++i) acc += kernel1d[i] * X.at(ic, y, ox + i);
                tmp.at(ic, y, ox) = acc;
            }
    Tensor out({c, ho, wo});
    for (int ic = 0; ic < c; ++ic)
        for (int oy = 0; oy < ho; ++oy)
            for (int ox = 0; ox < wo; ++ox) {
                double acc = 0.0;
                for (int i = 0; i < k; ++i) acc += kernel1d[i] * tmp.at(ic, oy + i, ox);
                out.at(ic, oy, ox) = acc;
            }

    std::vector<double> kern = kernel1d;
    return make_op(std::move(out), {x}, [c, h, w, ho, wo, k, kern](Node& self) {
        Node& p = *self.parents[0];
        if (!p.requires_grad) return;
        p.ensure_grad();
        for (int ic = 0; ic < c; ++ic)
            for (int oy = 0; oy < ho; ++oy)
                for (int ox = 0; ox < wo; ++ox) {
                    const double g = self.grad.at(ic, oy, ox);
                    if (g == 0.0) continue;
                    for (int i = 0; i < k; ++i)
                        for (int j = 0; j < k; ++j)
                            p.grad.at(ic, oy + i, ox + j) += g * kern[i] * kern[j];
                }
    });
}

namespace {

template <typename F, typename DF>
Var unary_op(const Var& a, F f, DF df) {
    Tensor out = a->value;
    for (std::int64_t i = 0; i < out.size(); ++i) out[i] = f(out[i]);
    return make_op(std::move(out), {a}, [df](Node& self) {
        Node& p = *self.parents[0];
        if (!p.requires_grad) return;
        p.ensure_grad();
        for (std::int64_t i = 0; i < self.grad.size(); ++i)
            p.grad[i] += self.grad[i] * df(p.value[i], self.value[i]);
    });
}

}  // namespace

Var relu(const Var& a) {
    return unary_op(a, [](double v) { return v > 0.0 ? v : 0.0; },
                    [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Var leaky_relu(const Var& a, double slope) {
    return unary_op(a, [slope](double v) { return v > 0.0 ? v : slope * v; },
                    [slope](double x, double) { return x > 0.0 ? 1.0 : slope; });
}

Var tanh_act(const Var& a) {
    return unary_op(a, [](double v) { return std::tanh(v); },
                    [](double, double y) { return 1.0 - y * y; });
}

Var sigmoid_act(const Var& a) {
    return unary_op(a, [](double v) { return 1.0 / (1.0 + std::exp(-v)); },
                    [](double, double y) { return y * (1.0 - y); });
}

Var log_act(const Var& a) {
    return unary_op(a, [](double v) { return std::log(v); },
                    [](double x, double) { return 1.0 / x; });
}

Var abs_act(const Var& a) {
    // subgradient 0 at the kink
    return unary_op(a, [](double v) { return std::fabs(v); },
                    [](double x, double) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
}

Var square(const Var& a) {
    return unary_op(a, [](double v) { return v * v; },
                    [](double x, double) { return 2.0 * x; });
}

Var pow_const(const Var& a, double p) {
    return unary_op(a, [p](double v) { return std::pow(v, p); },
                    [p](double x, double) { return p * std::pow(x, p - 1.0); });
}

Var clamp_min(const Var& a, double lo) {
    return unary_op(a, [lo](double v) { return v < lo ? lo : v; },
                    [lo](double x, double) { return x < lo ? 0.0 : 1.0; });
}

Var concat_channels(const std::vector<Var>& xs) {
    if (xs.empty()) throw DimensionError("concat_channels: empty input");
    const int h = xs[0]->value.dim(1), w = xs[0]->value.dim(2);
    int c_total = 0;
    for (const auto& x : xs) {
        if (x->value.rank() != 3 || x->value.dim(1) != h || x->value.dim(2) != w)
            throw DimensionError("concat_channels: spatial dims differ");
        c_total += x->value.dim(0);
    }
    Tensor out({c_total, h, w});
    std::size_t off = 0;
    for (const auto& x : xs) {
        const std::size_t n = static_cast<std::size_t>(x->value.size());
        std::copy(x->value.data(), x->value.data() + n, out.data() + off);
        off += n;
    }
    return make_op(std::move(out), xs, [](Node& self) {
        std::size_t off = 0;
        for (auto& par : self.parents) {
            const std::size_t n = static_cast<std::size_t>(par->value.size());
            if (par->requires_grad) {
                par->ensure_grad();
                for (std::size_t i = 0; i < n; ++i) par->grad[static_cast<std::int64_t>(i)] += self.grad[static_cast<std::int64_t>(off + i)];
            }
            off += n;
        }
    });
}

Var slice_channels(const Var& x, int c0, int c1) {
    const Tensor& X = x->value;
    if (X.rank() != 3 || c0 < 0 || c1 > X.dim(0) || c0 >= c1)
        throw DimensionError("slice_channels: bad range");
    const int h = X.dim(1), w = X.dim(2);
    Tensor out({c1 - c0, h, w});
    const std::size_t plane = std::size_t(h) * w;
    std::copy(X.data() + c0 * plane, X.data() + c1 * plane, out.data());
    return make_op(std::move(out), {x}, [c0, plane](Node& self) {
        Node& p = *self.parents[0];
        if (!p.requires_grad) return;
        p.ensure_grad();
        const std::size_t n = static_cast<std::size_t>(self.grad.size());
        for (std::size_t i = 0; i < n; ++i)
            p.grad[static_cast<std::int64_t>(c0 * plane + i)] += self.grad[static_cast<std::int64_t>(i)];
    });
}

Var concat_vec(const std::vector<Var>& xs) {
    if (xs.empty()) throw DimensionError("concat_vec: empty input");
    int n_total = 0;
    for (const auto& x : xs) {
        if (x->value.rank() != 1) throw DimensionError("concat_vec: rank-1 tensors required");
        n_total += x->value.dim(0);
    }
    Tensor out({n_total});
    std::size_t off = 0;
    for (const auto& x : xs) {
        const std::size_t n = static_cast<std::size_t>(x->value.size());
        std::copy(x->value.data(), x->value.data() + n, out.data() + off);
        off += n;
    }
    return make_op(std::move(out), xs, [](Node& self) {
        std::size_t off = 0;
        for (auto& par : self.parents) {
            const std::size_t n = static_cast<std::size_t>(par->value.size());
            if (par->requires_grad) {
                par->ensure_grad();
                for (std::size_t i = 0; i < n; ++i) par->grad[static_cast<std::int64_t>(i)] += self.grad[static_cast<std::int64_t>(off + i)];
            }
            off += n;
        }
    });
}

Var slice_vec(const Var& x, int i0, int i1) {
    const Tensor& X = x->value;
    if (X.rank() != 1 || i0 < 0 || i1 > X.dim(0) || i0 >= i1)
        throw DimensionError("slice_vec: bad range");
    Tensor out({i1 - i0});
    std::copy(X.data() + i0, X.data() + i1, out.data());
    return make_op(std::move(out), {x}, [i0](Node& self) {
        Node& p = *self.parents[0];
        if (!p.requires_grad) return;
        p.ensure_grad();
        for (std::int64_t i = 0; i < self.grad.size(); ++i) p.grad[i0 + i] += self.grad[i];
    });
}

Var add_rowvec(const Var& x, const Var& b) {
    const Tensor& X = x->value;
    const Tensor& B = b->value;
    if (X.rank() != 2 || B.rank() != 1 || B.dim(0) != X.dim(1))
        throw DimensionError("add_rowvec: incompatible shapes");
    const int m = X.dim(0), n = X.dim(1);
    Tensor out = X;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) out.at(i, j) += B[j];
    return make_op(std::move(out), {x, b}, [m, n](Node& self) {
        Node& px = *self.parents[0];
        Node& pb = *self.parents[1];
        if (px.requires_grad) accumulate(px, self.grad);
        if (pb.requires_grad) {
            pb.ensure_grad();
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j) pb.grad[j] += self.grad.at(i, j);
        }
    });
}

Var clamp_range(const Var& a, double lo, double hi) {
    return unary_op(a, [lo, hi](double v) { return v < lo ? lo : (v > hi ? hi : v); },
                    [lo, hi](double x, double) { return (x < lo || x > hi) ? 0.0 : 1.0; });
}

Var broadcast_mul(const Var& att, const Var& x) {
    const Tensor& A = att->value;
    const Tensor& X = x->value;
    if (A.rank() != 3 || X.rank() != 3 || A.dim(0) != 1 || A.dim(1) != X.dim(1) ||
        A.dim(2) != X.dim(2))
        throw DimensionError("broadcast_mul: attention must be [1,H,W] matching x");
    const int c = X.dim(0), h = X.dim(1), w = X.dim(2);
    Tensor out({c, h, w});
    const std::size_t plane = std::size_t(h) * w;
    for (int ic = 0; ic < c; ++ic)
        for (std::size_t i = 0; i < plane; ++i)
            out.data()[ic * plane + i] = A.data()[i] * X.data()[ic * plane + i];
    return make_op(std::move(out), {att, x}, [c, plane](Node& self) {
        Node& pa = *self.parents[0];
        Node& px = *self.parents[1];
        if (pa.requires_grad) {
            pa.ensure_grad();
            for (int ic = 0; ic < c; ++ic)
                for (std::size_t i = 0; i < plane; ++i)
                    pa.grad.data()[i] += self.grad.data()[ic * plane + i] * px.value.data()[ic * plane + i];
        }
        if (px.requires_grad) {
            px.ensure_grad();
            for (int ic = 0; ic < c; ++ic)
                for (std::size_t i = 0; i < plane; ++i)
                    px.grad.data()[ic * plane + i] += self.grad.data()[ic * plane + i] * pa.value.data()[i];
        }
    });
}

Var sum_all(const Var& a) {
    double acc = 0.0;
    for (std::int64_t i = 0; i < a->value.size(); ++i) acc += a->value[i];
    return make_op(Tensor::scalar(acc), {a}, [](Node& self) {
        Node& p = *self.parents[0];
        if (!p.requires_grad) return;
        p.ensure_grad();
        const double g = self.grad[0];
        for (std::int64_t i = 0; i < p.grad.size(); ++i) p.grad[i] += g;
    });
}

Var mean_all(const Var& a) {
    return scale(sum_all(a), 1.0 / static_cast<double>(a->value.size()));
}

Var mean_abs_diff(const Var& a, const Var& b) {
    return mean_all(abs_act(sub(a, b)));
}

Var mse(const Var& a, const Var& b) {
    return mean_all(square(sub(a, b)));
}

}  // namespace morphkit::nn
