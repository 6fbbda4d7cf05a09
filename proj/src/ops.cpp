#include "sal/ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sal {

namespace {

void check(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

void check_same_shape(const TensorPtr& a, const TensorPtr& b, const char* op) {
    check(a->shape == b->shape, std::string(op) + ": shape mismatch " + shape_str(a->shape) +
                                    " vs " + shape_str(b->shape));
}

int64_t ceil_div(int64_t a, int64_t b) {
    return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

}  // namespace

double logistic_value(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

TensorPtr add(const TensorPtr& a, const TensorPtr& b) {
    check_same_shape(a, b, "add");
    auto out = Tensor::create(a->shape);
    const int64_t n = a->numel();
    for (int64_t i = 0; i < n; ++i) out->values[i] = a->values[i] + b->values[i];
    attach_op(out, {a, b}, [a, b, n](Tensor& self) {
        if (a->needs_grad) a->accumulate_grad(self.grad.data(), n);
        if (b->needs_grad) b->accumulate_grad(self.grad.data(), n);
    });
    return out;
}

TensorPtr sub(const TensorPtr& a, const TensorPtr& b) {
    check_same_shape(a, b, "sub");
    auto out = Tensor::create(a->shape);
    const int64_t n = a->numel();
    for (int64_t i = 0; i < n; ++i) out->values[i] = a->values[i] - b->values[i];
    attach_op(out, {a, b}, [a, b, n](Tensor& self) {
        if (a->needs_grad) a->accumulate_grad(self.grad.data(), n);
        if (b->needs_grad) {
            b->ensure_grad();
            for (int64_t i = 0; i < n; ++i) b->grad[i] -= self.grad[i];
        }
    });
    return out;
}

TensorPtr mul(const TensorPtr& a, const TensorPtr& b) {
    check_same_shape(a, b, "mul");
    auto out = Tensor::create(a->shape);
    const int64_t n = a->numel();
    for (int64_t i = 0; i < n; ++i) out->values[i] = a->values[i] * b->values[i];
    attach_op(out, {a, b}, [a, b, n](Tensor& self) {
        if (a->needs_grad) {
            a->ensure_grad();
            for (int64_t i = 0; i < n; ++i) a->grad[i] += self.grad[i] * b->values[i];
        }
        if (b->needs_grad) {
            b->ensure_grad();
            for (int64_t i = 0; i < n; ++i) b->grad[i] += self.grad[i] * a->values[i];
        }
    });
    return out;
}

TensorPtr scale(const TensorPtr& a, double c) {
    auto out = Tensor::create(a->shape);
    const int64_t n = a->numel();
    for (int64_t i = 0; i < n; ++i) out->values[i] = a->values[i] * c;
    attach_op(out, {a}, [a, c, n](Tensor& self) {
        a->ensure_grad();
        for (int64_t i = 0; i < n; ++i) a->grad[i] += self.grad[i] * c;
    });
    return out;
}

TensorPtr add_scalar(const TensorPtr& a, double c) {
    auto out = Tensor::create(a->shape);
    const int64_t n = a->numel();
    for (int64_t i = 0; i < n; ++i) out->values[i] = a->values[i] + c;
    attach_op(out, {a}, [a, n](Tensor& self) { a->accumulate_grad(self.grad.data(), n); });
    return out;
}

TensorPtr one_minus(const TensorPtr& a) {
    auto out = Tensor::create(a->shape);
    const int64_t n = a->numel();
    for (int64_t i = 0; i < n; ++i) out->values[i] = 1.0 - a->values[i];
    attach_op(out, {a}, [a, n](Tensor& self) {
        a->ensure_grad();
        for (int64_t i = 0; i < n; ++i) a->grad[i] -= self.grad[i];
    });
    return out;
}

TensorPtr sum(const TensorPtr& a) {
    auto out = Tensor::create({1});
    double s = 0.0;
    for (double v : a->values) s += v;
    out->values[0] = s;
    const int64_t n = a->numel();
    attach_op(out, {a}, [a, n](Tensor& self) {
        a->ensure_grad();
        const double g = self.grad[0];
        for (int64_t i = 0; i < n; ++i) a->grad[i] += g;
    });
    return out;
}

TensorPtr mean(const TensorPtr& a) {
    const int64_t n = a->numel();
    auto out = Tensor::create({1});
    double s = 0.0;
    for (double v : a->values) s += v;
    out->values[0] = s / static_cast<double>(n);
    attach_op(out, {a}, [a, n](Tensor& self) {
        a->ensure_grad();
        const double g = self.grad[0] / static_cast<double>(n);
        for (int64_t i = 0; i < n; ++i) a->grad[i] += g;
    });
    return out;
}

TensorPtr pointwise_activation(const TensorPtr& a, Act kind) {
    auto out = Tensor::create(a->shape);
    const int64_t n = a->numel();
    switch (kind) {
        case Act::Logistic:
            for (int64_t i = 0; i < n; ++i) out->values[i] = logistic_value(a->values[i]);
            break;
        case Act::Tanh:
            for (int64_t i = 0; i < n; ++i) out->values[i] = std::tanh(a->values[i]);
            break;
        case Act::Relu:
            for (int64_t i = 0; i < n; ++i) out->values[i] = a->values[i] > 0.0 ? a->values[i] : 0.0;
            break;
    }
    attach_op(out, {a}, [a, kind, n](Tensor& self) {
        a->ensure_grad();
        switch (kind) {
            case Act::Logistic:
                for (int64_t i = 0; i < n; ++i) {
                    const double y = self.values[i];
                    a->grad[i] += self.grad[i] * y * (1.0 - y);
                }
                break;
            case Act::Tanh:
                for (int64_t i = 0; i < n; ++i) {
                    const double y = self.values[i];
                    a->grad[i] += self.grad[i] * (1.0 - y * y);
                }
                break;
            case Act::Relu:
                for (int64_t i = 0; i < n; ++i) {
                    if (a->values[i] > 0.0) a->grad[i] += self.grad[i];
                }
                break;
        }
    });
    return out;
}

TensorPtr logistic(const TensorPtr& a) { return pointwise_activation(a, Act::Logistic); }
TensorPtr tanh_act(const TensorPtr& a) { return pointwise_activation(a, Act::Tanh); }
TensorPtr relu(const TensorPtr& a) { return pointwise_activation(a, Act::Relu); }

TensorPtr reshape(const TensorPtr& a, Shape shape) {
    check(shape_numel(shape) == a->numel(),
          "reshape: element count mismatch " + shape_str(a->shape) + " -> " + shape_str(shape));
    auto out = Tensor::from(std::move(shape), a->values);
    const int64_t n = a->numel();
    attach_op(out, {a}, [a, n](Tensor& self) { a->accumulate_grad(self.grad.data(), n); });
    return out;
}

TensorPtr concat_channels(const std::vector<TensorPtr>& parts) {
    check(!parts.empty(), "concat_channels: empty input list");
    const auto& ref = parts[0]->shape;
    check(ref.size() == 4, "concat_channels: expected NCHW tensors");
    int64_t channels = 0;
    for (const auto& p : parts) {
        check(p->shape.size() == 4 && p->shape[0] == ref[0] && p->shape[2] == ref[2] &&
                  p->shape[3] == ref[3],
              "concat_channels: incompatible shape " + shape_str(p->shape));
        channels += p->shape[1];
    }
    const int64_t batch = ref[0], hw = ref[2] * ref[3];
    auto out = Tensor::create({batch, channels, ref[2], ref[3]});
    int64_t coff = 0;
    for (const auto& p : parts) {
        const int64_t pc = p->shape[1];
        for (int64_t n = 0; n < batch; ++n) {
            std::copy_n(p->values.data() + n * pc * hw, pc * hw,
                        out->values.data() + (n * channels + coff) * hw);
        }
        coff += pc;
    }
    std::vector<TensorPtr> parents(parts.begin(), parts.end());
    attach_op(out, parents, [parts, batch, channels, hw](Tensor& self) {
        int64_t coff = 0;
        for (const auto& p : parts) {
            const int64_t pc = p->shape[1];
            if (p->needs_grad) {
                p->ensure_grad();
                for (int64_t n = 0; n < batch; ++n) {
                    const double* g = self.grad.data() + (n * channels + coff) * hw;
                    double* pg = p->grad.data() + n * pc * hw;
                    for (int64_t i = 0; i < pc * hw; ++i) pg[i] += g[i];
                }
            }
            coff += pc;
        }
    });
    return out;
}

namespace {

struct ConvDims {
    int64_t batch, in_c, in_h, in_w;
    int64_t out_c, kh, kw;
    int64_t out_h, out_w;
    int64_t stride, pad, dil;
};

// Per-tap row loops. With stride 1 both sides of the update walk contiguous
// memory, which is what the compiler vectorizes.
void tap_forward(const double* in_plane, double* out_plane, double wv, const ConvDims& d,
                 int64_t ky, int64_t kx) {
    const int64_t off_y = ky * d.dil - d.pad;
    const int64_t off_x = kx * d.dil - d.pad;
    const int64_t oy_lo = std::max<int64_t>(0, ceil_div(-off_y, d.stride));
    const int64_t oy_hi = std::min(d.out_h - 1, (d.in_h - 1 - off_y) / d.stride);
    const int64_t ox_lo = std::max<int64_t>(0, ceil_div(-off_x, d.stride));
    const int64_t ox_hi = std::min(d.out_w - 1, (d.in_w - 1 - off_x) / d.stride);
    if (oy_lo > oy_hi || ox_lo > ox_hi) return;
    for (int64_t oy = oy_lo; oy <= oy_hi; ++oy) {
        const double* irow = in_plane + (oy * d.stride + off_y) * d.in_w;
        double* orow = out_plane + oy * d.out_w;
        if (d.stride == 1) {
            const double* ip = irow + ox_lo + off_x;
            double* op = orow + ox_lo;
            const int64_t count = ox_hi - ox_lo + 1;
            for (int64_t i = 0; i < count; ++i) op[i] += wv * ip[i];
        } else {
            for (int64_t ox = ox_lo; ox <= ox_hi; ++ox)
                orow[ox] += wv * irow[ox * d.stride + off_x];
        }
    }
}

void tap_backward_input(double* din_plane, const double* gout_plane, double wv,
                        const ConvDims& d, int64_t ky, int64_t kx) {
    const int64_t off_y = ky * d.dil - d.pad;
    const int64_t off_x = kx * d.dil - d.pad;
    const int64_t oy_lo = std::max<int64_t>(0, ceil_div(-off_y, d.stride));
    const int64_t oy_hi = std::min(d.out_h - 1, (d.in_h - 1 - off_y) / d.stride);
    const int64_t ox_lo = std::max<int64_t>(0, ceil_div(-off_x, d.stride));
    const int64_t ox_hi = std::min(d.out_w - 1, (d.in_w - 1 - off_x) / d.stride);
    if (oy_lo > oy_hi || ox_lo > ox_hi) return;
    for (int64_t oy = oy_lo; oy <= oy_hi; ++oy) {
        double* drow = din_plane + (oy * d.stride + off_y) * d.in_w;
        const double* grow = gout_plane + oy * d.out_w;
        if (d.stride == 1) {
            double* dp = drow + ox_lo + off_x;
            const double* gp = grow + ox_lo;
            const int64_t count = ox_hi - ox_lo + 1;
            for (int64_t i = 0; i < count; ++i) dp[i] += wv * gp[i];
        } else {
            for (int64_t ox = ox_lo; ox <= ox_hi; ++ox)
                drow[ox * d.stride + off_x] += wv * grow[ox];
        }
    }
}

double tap_backward_weight(const double* in_plane, const double* gout_plane, const ConvDims& d,
                           int64_t ky, int64_t kx) {
    const int64_t off_y = ky * d.dil - d.pad;
    const int64_t off_x = kx * d.dil - d.pad;
    const int64_t oy_lo = std::max<int64_t>(0, ceil_div(-off_y, d.stride));
    const int64_t oy_hi = std::min(d.out_h - 1, (d.in_h - 1 - off_y) / d.stride);
    const int64_t ox_lo = std::max<int64_t>(0, ceil_div(-off_x, d.stride));
    const int64_t ox_hi = std::min(d.out_w - 1, (d.in_w - 1 - off_x) / d.stride);
    double acc = 0.0;
    if (oy_lo > oy_hi || ox_lo > ox_hi) return acc;
    for (int64_t oy = oy_lo; oy <= oy_hi; ++oy) {
        const double* irow = in_plane + (oy * d.stride + off_y) * d.in_w;
        const double* grow = gout_plane + oy * d.out_w;
        if (d.stride == 1) {
            const double* ip = irow + ox_lo + off_x;
            const double* gp = grow + ox_lo;
            const int64_t count = ox_hi - ox_lo + 1;
            for (int64_t i = 0; i < count; ++i) acc += gp[i] * ip[i];
        } else {
            for (int64_t ox = ox_lo; ox <= ox_hi; ++ox)
                acc += grow[ox] * irow[ox * d.stride + off_x];
        }
    }
    return acc;
}

}  // namespace

TensorPtr conv2d(const TensorPtr& input, const TensorPtr& weight, const TensorPtr& bias,
                 int64_t stride, int64_t padding, int64_t dilation) {
    check(input->shape.size() == 4, "conv2d: input must be NCHW, got " + shape_str(input->shape));
    check(weight->shape.size() == 4, "conv2d: weight must be OIHW, got " + shape_str(weight->shape));
    check(stride >= 1 && padding >= 0 && dilation >= 1, "conv2d: bad stride/padding/dilation");
    ConvDims d;
    d.batch = input->shape[0];
    d.in_c = input->shape[1];
    d.in_h = input->shape[2];
    d.in_w = input->shape[3];
    d.out_c = weight->shape[0];
    d.kh = weight->shape[2];
    d.kw = weight->shape[3];
    d.stride = stride;
    d.pad = padding;
    d.dil = dilation;
    check(weight->shape[1] == d.in_c, "conv2d: channel mismatch, input has " +
                                          std::to_string(d.in_c) + ", weight expects " +
                                          std::to_string(weight->shape[1]));
    if (bias) check(bias->shape == Shape{d.out_c}, "conv2d: bias shape mismatch");
    d.out_h = (d.in_h + 2 * padding - dilation * (d.kh - 1) - 1) / stride + 1;
    d.out_w = (d.in_w + 2 * padding - dilation * (d.kw - 1) - 1) / stride + 1;
    check(d.in_h + 2 * padding >= dilation * (d.kh - 1) + 1 &&
              d.in_w + 2 * padding >= dilation * (d.kw - 1) + 1,
          "conv2d: non-positive output extent");

    auto out = Tensor::create({d.batch, d.out_c, d.out_h, d.out_w});
    const int64_t ohw = d.out_h * d.out_w;
    for (int64_t n = 0; n < d.batch; ++n) {
        for (int64_t oc = 0; oc < d.out_c; ++oc) {
            double* op = out->plane(n, oc);
            if (bias) std::fill_n(op, ohw, bias->values[oc]);
            const double* wbase = weight->values.data() + oc * d.in_c * d.kh * d.kw;
            for (int64_t ic = 0; ic < d.in_c; ++ic) {
                const double* ip = input->plane(n, ic);
                const double* wk = wbase + ic * d.kh * d.kw;
                for (int64_t ky = 0; ky < d.kh; ++ky)
                    for (int64_t kx = 0; kx < d.kw; ++kx)
                        tap_forward(ip, op, wk[ky * d.kw + kx], d, ky, kx);
            }
        }
    }

    std::vector<TensorPtr> parents = bias ? std::vector<TensorPtr>{input, weight, bias}
                                          : std::vector<TensorPtr>{input, weight};
    attach_op(out, parents, [input, weight, bias, d, ohw](Tensor& self) {
        if (input->needs_grad) input->ensure_grad();
        if (weight->needs_grad) weight->ensure_grad();
        if (bias && bias->needs_grad) bias->ensure_grad();
        for (int64_t n = 0; n < d.batch; ++n) {
            for (int64_t oc = 0; oc < d.out_c; ++oc) {
                const double* gp = self.grad.data() + (n * d.out_c + oc) * ohw;
                if (bias && bias->needs_grad) {
                    double acc = 0.0;
                    for (int64_t i = 0; i < ohw; ++i) acc += gp[i];
                    bias->grad[oc] += acc;
                }
                const double* wbase = weight->values.data() + oc * d.in_c * d.kh * d.kw;
                for (int64_t ic = 0; ic < d.in_c; ++ic) {
                    const double* wk = wbase + ic * d.kh * d.kw;
                    if (input->needs_grad) {
                        double* dip = input->grad_plane(n, ic);
                        for (int64_t ky = 0; ky < d.kh; ++ky)
                            for (int64_t kx = 0; kx < d.kw; ++kx)
                                tap_backward_input(dip, gp, wk[ky * d.kw + kx], d, ky, kx);
                    }
                    if (weight->needs_grad) {
                        const double* ip = input->plane(n, ic);
                        double* dwk = weight->grad.data() + (oc * d.in_c + ic) * d.kh * d.kw;
                        for (int64_t ky = 0; ky < d.kh; ++ky)
                            for (int64_t kx = 0; kx < d.kw; ++kx)
                                dwk[ky * d.kw + kx] += tap_backward_weight(ip, gp, d, ky, kx);
                    }
                }
            }
        }
    });
    return out;
}

TensorPtr maxpool2(const TensorPtr& input) {
    check(input->shape.size() == 4, "maxpool2: input must be NCHW");
    const int64_t batch = input->shape[0], ch = input->shape[1];
    const int64_t in_h = input->shape[2], in_w = input->shape[3];
    check(in_h >= 2 && in_w >= 2, "maxpool2: spatial extent below 2");
    const int64_t out_h = in_h / 2, out_w = in_w / 2;
    auto out = Tensor::create({batch, ch, out_h, out_w});
    std::vector<int64_t> argmax(static_cast<size_t>(out->numel()));
    int64_t oi = 0;
    for (int64_t n = 0; n < batch; ++n) {
        for (int64_t c = 0; c < ch; ++c) {
            const double* ip = input->plane(n, c);
            double* op = out->plane(n, c);
            for (int64_t oy = 0; oy < out_h; ++oy) {
                for (int64_t ox = 0; ox < out_w; ++ox) {
                    const int64_t base = (2 * oy) * in_w + 2 * ox;
                    // row-major window order; ties keep the first occurrence
                    int64_t best = base;
                    double bv = ip[base];
                    if (ip[base + 1] > bv) { bv = ip[base + 1]; best = base + 1; }
                    if (ip[base + in_w] > bv) { bv = ip[base + in_w]; best = base + in_w; }
                    if (ip[base + in_w + 1] > bv) { bv = ip[base + in_w + 1]; best = base + in_w + 1; }
                    op[oy * out_w + ox] = bv;
                    argmax[oi++] = (n * ch + c) * in_h * in_w + best;
                }
            }
        }
    }
    attach_op(out, {input}, [input, argmax = std::move(argmax)](Tensor& self) {
        input->ensure_grad();
        const int64_t n = self.numel();
        for (int64_t i = 0; i < n; ++i) input->grad[argmax[i]] += self.grad[i];
    });
    return out;
}

TensorPtr fully_connected(const TensorPtr& input, const TensorPtr& weight, const TensorPtr& bias) {
    check(input->shape.size() == 2, "fully_connected: input must be [N,D]");
    check(weight->shape.size() == 2, "fully_connected: weight must be [O,D]");
    const int64_t batch = input->shape[0], in_d = input->shape[1], out_d = weight->shape[0];
    check(weight->shape[1] == in_d, "fully_connected: extent mismatch, input D=" +
                                        std::to_string(in_d) + " vs weight D=" +
                                        std::to_string(weight->shape[1]));
    check(bias && bias->shape == Shape{out_d}, "fully_connected: bias shape mismatch");
    auto out = Tensor::create({batch, out_d});
    for (int64_t n = 0; n < batch; ++n) {
        const double* xr = input->values.data() + n * in_d;
        double* orow = out->values.data() + n * out_d;
        for (int64_t o = 0; o < out_d; ++o) {
            const double* wr = weight->values.data() + o * in_d;
            double acc = bias->values[o];
            for (int64_t i = 0; i < in_d; ++i) acc += xr[i] * wr[i];
            orow[o] = acc;
        }
    }
    attach_op(out, {input, weight, bias}, [input, weight, bias, batch, in_d, out_d](Tensor& self) {
        if (input->needs_grad) input->ensure_grad();
        if (weight->needs_grad) weight->ensure_grad();
        if (bias->needs_grad) bias->ensure_grad();
        for (int64_t n = 0; n < batch; ++n) {
            const double* grow = self.grad.data() + n * out_d;
            for (int64_t o = 0; o < out_d; ++o) {
                const double g = grow[o];
                if (g == 0.0) continue;
                if (input->needs_grad) {
                    double* dx = input->grad.data() + n * in_d;
                    const double* wr = weight->values.data() + o * in_d;
                    for (int64_t i = 0; i < in_d; ++i) dx[i] += g * wr[i];
                }
                if (weight->needs_grad) {
                    double* dw = weight->grad.data() + o * in_d;
                    const double* xr = input->values.data() + n * in_d;
                    for (int64_t i = 0; i < in_d; ++i) dw[i] += g * xr[i];
                }
                if (bias->needs_grad) bias->grad[o] += g;
            }
        }
    });
    return out;
}

namespace {

// Align-corners source coordinates: extent 1 collapses onto the first pixel.
struct ResizeAxis {
    std::vector<int64_t> lo, hi;
    std::vector<double> frac;
};

ResizeAxis make_axis(int64_t out_n, int64_t in_n) {
    ResizeAxis ax;
    ax.lo.resize(out_n);
    ax.hi.resize(out_n);
    ax.frac.resize(out_n);
    const double step = out_n > 1 ? static_cast<double>(in_n - 1) / static_cast<double>(out_n - 1) : 0.0;
    for (int64_t o = 0; o < out_n; ++o) {
        const double src = step * static_cast<double>(o);
        int64_t lo = static_cast<int64_t>(std::floor(src));
        if (lo > in_n - 1) lo = in_n - 1;
        ax.lo[o] = lo;
        ax.hi[o] = std::min(lo + 1, in_n - 1);
        ax.frac[o] = src - static_cast<double>(lo);
    }
    return ax;
}

}  // namespace

TensorPtr bilinear_resize(const TensorPtr& input, int64_t out_h, int64_t out_w) {
    check(input->shape.size() == 4, "bilinear_resize: input must be NCHW");
    check(out_h >= 1 && out_w >= 1, "bilinear_resize: non-positive target size");
    const int64_t batch = input->shape[0], ch = input->shape[1];
    const int64_t in_h = input->shape[2], in_w = input->shape[3];
    const ResizeAxis ay = make_axis(out_h, in_h);
    const ResizeAxis axx = make_axis(out_w, in_w);
    auto out = Tensor::create({batch, ch, out_h, out_w});
    for (int64_t n = 0; n < batch; ++n) {
        for (int64_t c = 0; c < ch; ++c) {
            const double* ip = input->plane(n, c);
            double* op = out->plane(n, c);
            for (int64_t oy = 0; oy < out_h; ++oy) {
                const double fy = ay.frac[oy];
                const double* r0 = ip + ay.lo[oy] * in_w;
                const double* r1 = ip + ay.hi[oy] * in_w;
                for (int64_t ox = 0; ox < out_w; ++ox) {
                    const double fx = axx.frac[ox];
                    const int64_t x0 = axx.lo[ox], x1 = axx.hi[ox];
                    const double top = r0[x0] + fx * (r0[x1] - r0[x0]);
                    const double bot = r1[x0] + fx * (r1[x1] - r1[x0]);
                    op[oy * out_w + ox] = top + fy * (bot - top);
                }
            }
        }
    }
    attach_op(out, {input}, [input, ay, axx, batch, ch, in_w, out_h, out_w](Tensor& self) {
        input->ensure_grad();
        const int64_t in_hw = input->shape[2] * in_w;
        for (int64_t n = 0; n < batch; ++n) {
            for (int64_t c = 0; c < ch; ++c) {
                double* dip = input->grad.data() + (n * ch + c) * in_hw;
                const double* gp = self.grad.data() + (n * ch + c) * out_h * out_w;
                for (int64_t oy = 0; oy < out_h; ++oy) {
                    const double fy = ay.frac[oy];
                    double* r0 = dip + ay.lo[oy] * in_w;
                    double* r1 = dip + ay.hi[oy] * in_w;
                    for (int64_t ox = 0; ox < out_w; ++ox) {
                        const double g = gp[oy * out_w + ox];
                        if (g == 0.0) continue;
                        const double fx = axx.frac[ox];
                        const int64_t x0 = axx.lo[ox], x1 = axx.hi[ox];
                        r0[x0] += g * (1.0 - fy) * (1.0 - fx);
                        r0[x1] += g * (1.0 - fy) * fx;
                        r1[x0] += g * fy * (1.0 - fx);
                        r1[x1] += g * fy * fx;
                    }
                }
            }
        }
    });
    return out;
}

}  // namespace sal
