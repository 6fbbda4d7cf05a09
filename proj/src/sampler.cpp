#include "sal/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sal/ops.hpp"

namespace sal {

CropBox crop_from_raw(const TensorPtr& raw, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("crop_from_raw: epsilon must be in (0,1)");
    if (raw->shape != Shape{4})
        throw std::invalid_argument("crop_from_raw: raw must have shape [4], got " +
                                    shape_str(raw->shape));
    const double s0 = logistic_value(raw->values[0]);
    const double s1 = logistic_value(raw->values[1]);
    const double s2 = logistic_value(raw->values[2]);
    const double s3 = logistic_value(raw->values[3]);
    const double w = epsilon + (1.0 - epsilon) * s2;
    const double h = epsilon + (1.0 - epsilon) * s3;
    const double x1 = s0 * (1.0 - w);
    const double y1 = s1 * (1.0 - h);
    auto coords = Tensor::from({4}, {x1, y1, x1 + w, y1 + h});
    attach_op(coords, {raw}, [raw, s0, s1, s2, s3, epsilon](Tensor& self) {
        raw->ensure_grad();
        const double gx1 = self.grad[0], gy1 = self.grad[1];
        const double gx2 = self.grad[2], gy2 = self.grad[3];
        const double w = epsilon + (1.0 - epsilon) * s2;
        const double h = epsilon + (1.0 - epsilon) * s3;
        const double dw = (1.0 - epsilon) * s2 * (1.0 - s2);  // dw/draw2
        const double dh = (1.0 - epsilon) * s3 * (1.0 - s3);
        raw->grad[0] += (gx1 + gx2) * s0 * (1.0 - s0) * (1.0 - w);
        raw->grad[1] += (gy1 + gy2) * s1 * (1.0 - s1) * (1.0 - h);
        raw->grad[2] += dw * ((1.0 - s0) * gx2 - s0 * gx1);
        raw->grad[3] += dh * ((1.0 - s1) * gy2 - s1 * gy1);
    });
    return CropBox{coords};
}

SamplingGrid make_grid(const CropBox& box, int64_t out_h, int64_t out_w, int64_t src_h,
                       int64_t src_w) {
    if (out_h < 1 || out_w < 1 || src_h < 1 || src_w < 1)
        throw std::invalid_argument("make_grid: non-positive extent");
    const auto& c = box.coords;
    const double x1 = c->values[0], y1 = c->values[1];
    const double x2 = c->values[2], y2 = c->values[3];
    const double sw = static_cast<double>(src_w - 1);
    const double sh = static_cast<double>(src_h - 1);
    auto grid = Tensor::create({2, out_h, out_w});
    double* u = grid->values.data();
    double* v = u + out_h * out_w;
    for (int64_t oy = 0; oy < out_h; ++oy) {
        const double ty = out_h > 1 ? static_cast<double>(oy) / static_cast<double>(out_h - 1) : 0.0;
        const double vy = (y1 + (y2 - y1) * ty) * sh;
        for (int64_t ox = 0; ox < out_w; ++ox) {
            const double tx = out_w > 1 ? static_cast<double>(ox) / static_cast<double>(out_w - 1) : 0.0;
            u[oy * out_w + ox] = (x1 + (x2 - x1) * tx) * sw;
            v[oy * out_w + ox] = vy;
        }
    }
    attach_op(grid, {c}, [c, out_h, out_w, sw, sh](Tensor& self) {
        c->ensure_grad();
        const int64_t hw = out_h * out_w;
        const double* gu = self.grad.data();
        const double* gv = gu + hw;
        double gx1 = 0.0, gy1 = 0.0, gx2 = 0.0, gy2 = 0.0;
        for (int64_t oy = 0; oy < out_h; ++oy) {
            const double ty = out_h > 1 ? static_cast<double>(oy) / static_cast<double>(out_h - 1) : 0.0;
            for (int64_t ox = 0; ox < out_w; ++ox) {
                const double tx = out_w > 1 ? static_cast<double>(ox) / static_cast<double>(out_w - 1) : 0.0;
                const double du = gu[oy * out_w + ox] * sw;
                const double dv = gv[oy * out_w + ox] * sh;
                gx1 += du * (1.0 - tx);
                gx2 += du * tx;
                gy1 += dv * (1.0 - ty);
                gy2 += dv * ty;
            }
        }
        c->grad[0] += gx1;
        c->grad[1] += gy1;
        c->grad[2] += gx2;
        c->grad[3] += gy2;
    });
    return SamplingGrid{grid, src_h, src_w};
}

TensorPtr grid_sample_bilinear(const TensorPtr& image, const SamplingGrid& grid) {
    if (image->shape.size() != 4)
        throw std::invalid_argument("grid_sample_bilinear: image must be NCHW");
    const auto& g = grid.coords;
    if (g->shape.size() != 3 || g->shape[0] != 2)
        throw std::invalid_argument("grid_sample_bilinear: grid must be [2,H,W]");
    if (image->shape[2] != grid.src_h || image->shape[3] != grid.src_w)
        throw std::invalid_argument("grid_sample_bilinear: grid source size mismatch");
    const int64_t batch = image->shape[0], ch = image->shape[1];
    const int64_t in_h = image->shape[2], in_w = image->shape[3];
    const int64_t out_h = g->shape[1], out_w = g->shape[2];
    const int64_t ohw = out_h * out_w;
    auto out = Tensor::create({batch, ch, out_h, out_w});
    const double* u = g->values.data();
    const double* v = u + ohw;
    for (int64_t i = 0; i < ohw; ++i) {
        const double cu = std::clamp(u[i], 0.0, static_cast<double>(in_w - 1));
        const double cv = std::clamp(v[i], 0.0, static_cast<double>(in_h - 1));
        const int64_t x0 = static_cast<int64_t>(std::floor(cu));
        const int64_t y0 = static_cast<int64_t>(std::floor(cv));
        const int64_t x1 = std::min(x0 + 1, in_w - 1);
        const int64_t y1 = std::min(y0 + 1, in_h - 1);
        const double fx = cu - static_cast<double>(x0);
        const double fy = cv - static_cast<double>(y0);
        for (int64_t n = 0; n < batch; ++n) {
            for (int64_t c = 0; c < ch; ++c) {
                const double* ip = image->plane(n, c);
                const double top = ip[y0 * in_w + x0] + fx * (ip[y0 * in_w + x1] - ip[y0 * in_w + x0]);
                const double bot = ip[y1 * in_w + x0] + fx * (ip[y1 * in_w + x1] - ip[y1 * in_w + x0]);
                out->plane(n, c)[i] = top + fy * (bot - top);
            }
        }
    }
    attach_op(out, {image, g}, [image, g, batch, ch, in_h, in_w, ohw](Tensor& self) {
        if (image->needs_grad) image->ensure_grad();
        if (g->needs_grad) g->ensure_grad();
        const double* u = g->values.data();
        const double* v = u + ohw;
        for (int64_t i = 0; i < ohw; ++i) {
            const bool in_range_u = u[i] >= 0.0 && u[i] <= static_cast<double>(in_w - 1);
            const bool in_range_v = v[i] >= 0.0 && v[i] <= static_cast<double>(in_h - 1);
            const double cu = std::clamp(u[i], 0.0, static_cast<double>(in_w - 1));
            const double cv = std::clamp(v[i], 0.0, static_cast<double>(in_h - 1));
            const int64_t x0 = static_cast<int64_t>(std::floor(cu));
            const int64_t y0 = static_cast<int64_t>(std::floor(cv));
            const int64_t x1 = std::min(x0 + 1, in_w - 1);
            const int64_t y1 = std::min(y0 + 1, in_h - 1);
            const double fx = cu - static_cast<double>(x0);
            const double fy = cv - static_cast<double>(y0);
            double du = 0.0, dv = 0.0;
            for (int64_t n = 0; n < batch; ++n) {
                for (int64_t c = 0; c < ch; ++c) {
                    const double gout = self.grad[(n * ch + c) * ohw + i];
                    if (gout == 0.0) continue;
                    if (image->needs_grad) {
                        double* dip = image->grad_plane(n, c);
                        dip[y0 * in_w + x0] += gout * (1.0 - fy) * (1.0 - fx);
                        dip[y0 * in_w + x1] += gout * (1.0 - fy) * fx;
                        dip[y1 * in_w + x0] += gout * fy * (1.0 - fx);
                        dip[y1 * in_w + x1] += gout * fy * fx;
                    }
                    if (g->needs_grad) {
                        const double* ip = image->plane(n, c);
                        du += gout * ((1.0 - fy) * (ip[y0 * in_w + x1] - ip[y0 * in_w + x0]) +
                                      fy * (ip[y1 * in_w + x1] - ip[y1 * in_w + x0]));
                        dv += gout * ((1.0 - fx) * (ip[y1 * in_w + x0] - ip[y0 * in_w + x0]) +
                                      fx * (ip[y1 * in_w + x1] - ip[y0 * in_w + x1]));
                    }
                }
            }
            if (g->needs_grad) {
                if (in_range_u) g->grad[i] += du;
                if (in_range_v) g->grad[ohw + i] += dv;
            }
        }
    });
    return out;
}

}  // namespace sal
