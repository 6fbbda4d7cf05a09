#include "sal/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sal/losses.hpp"
#include "sal/ops.hpp"
#include "sal/ram.hpp"
#include "sal/rng.hpp"
#include "sal/sampler.hpp"

namespace sal {

double grad_check(const ScalarFn& f, const TensorPtr& x, double h) {
    x->set_trainable(true);
    x->grad.clear();
    auto loss = f(x);
    if (loss->numel() != 1) throw std::invalid_argument("grad_check: function must be scalar-valued");
    backward(loss);
    std::vector<double> analytic = x->grad;
    if (analytic.empty()) analytic.assign(x->values.size(), 0.0);

    double max_err = 0.0;
    const int64_t n = x->numel();
    for (int64_t i = 0; i < n; ++i) {
        const double saved = x->values[i];
        x->values[i] = saved + h;
        const double fp = f(x)->item();
        x->values[i] = saved - h;
        const double fm = f(x)->item();
        x->values[i] = saved;
        const double numeric = (fp - fm) / (2.0 * h);
        const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-8});
        max_err = std::max(max_err, std::abs(analytic[i] - numeric) / denom);
    }
    return max_err;
}

namespace {

TensorPtr random_tensor(Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
    auto t = Tensor::create(std::move(shape));
    for (auto& v : t->values) v = rng.uniform(lo, hi);
    return t;
}

// Weighted sum reduces a map to a scalar without washing gradients out.
TensorPtr weighted_sum(const TensorPtr& t, Rng& rng) {
    auto w = random_tensor(t->shape, rng);
    return sum(mul(t, w));
}

struct OpCase {
    std::string name;
    // Runs one seeded instance and returns the max error over all checked inputs.
    double (*run)(uint64_t seed, double h);
};

double check_inputs(const std::vector<TensorPtr>& inputs,
                    const std::function<TensorPtr()>& forward, double h) {
    double worst = 0.0;
    for (const auto& input : inputs) {
        auto err = grad_check([&](const TensorPtr&) { return forward(); }, input, h);
        worst = std::max(worst, err);
        input->set_trainable(false);
    }
    return worst;
}

double case_conv2d(uint64_t seed, double h) {
    Rng rng(seed);
    double worst = 0.0;
    struct Geometry {
        Shape in, w;
        int64_t stride, pad, dil;
    };
    // plain, strided, and dilated taps
    const Geometry geos[] = {{{1, 2, 5, 5}, {3, 2, 3, 3}, 1, 1, 1},
                             {{1, 2, 7, 6}, {2, 2, 3, 3}, 2, 1, 1},
                             {{1, 1, 9, 9}, {2, 1, 3, 3}, 1, 2, 2}};
    for (const auto& g : geos) {
        auto x = random_tensor(g.in, rng);
        auto w = random_tensor(g.w, rng, -0.5, 0.5);
        auto b = random_tensor({g.w[0]}, rng, -0.2, 0.2);
        Rng wrng(rng.fork());
        auto fwd = [&]() {
            auto y = conv2d(x, w, b, g.stride, g.pad, g.dil);
            Rng local(wrng.seed());
            return weighted_sum(y, local);
        };
        worst = std::max(worst, check_inputs({x, w, b}, fwd, h));
    }
    return worst;
}

double case_maxpool2(uint64_t seed, double h) {
    Rng rng(seed);
    auto x = random_tensor({1, 2, 6, 6}, rng);
    Rng wrng(rng.fork());
    auto fwd = [&]() {
        Rng local(wrng.seed());
        return weighted_sum(maxpool2(x), local);
    };
    return check_inputs({x}, fwd, h);
}

double case_fully_connected(uint64_t seed, double h) {
    Rng rng(seed);
    auto x = random_tensor({2, 5}, rng);
    auto w = random_tensor({3, 5}, rng);
    auto b = random_tensor({3}, rng);
    Rng wrng(rng.fork());
    auto fwd = [&]() {
        Rng local(wrng.seed());
        return weighted_sum(fully_connected(x, w, b), local);
    };
    return check_inputs({x, w, b}, fwd, h);
}

double case_activation(uint64_t seed, double h, Act kind) {
    Rng rng(seed);
    auto x = random_tensor({7}, rng, -2.0, 2.0);
    // keep relu inputs away from the kink
    if (kind == Act::Relu)
        for (auto& v : x->values)
            if (std::abs(v) < 1e-3) v = 0.5;
    Rng wrng(rng.fork());
    auto fwd = [&]() {
        Rng local(wrng.seed());
        return weighted_sum(pointwise_activation(x, kind), local);
    };
    return check_inputs({x}, fwd, h);
}

double case_bilinear_resize(uint64_t seed, double h) {
    Rng rng(seed);
    auto x = random_tensor({1, 2, 3, 4}, rng);
    Rng wrng(rng.fork());
    double worst = 0.0;
    for (auto [oh, ow] : {std::pair<int64_t, int64_t>{5, 7}, {2, 3}}) {
        auto fwd = [&, oh = oh, ow = ow]() {
            Rng local(wrng.seed());
            return weighted_sum(bilinear_resize(x, oh, ow), local);
        };
        worst = std::max(worst, check_inputs({x}, fwd, h));
    }
    return worst;
}

double case_crop_from_raw(uint64_t seed, double h) {
    Rng rng(seed);
    auto raw = random_tensor({4}, rng, -1.5, 1.5);
    Rng wrng(rng.fork());
    auto fwd = [&]() {
        Rng local(wrng.seed());
        return weighted_sum(crop_from_raw(raw, 0.6).coords, local);
    };
    return check_inputs({raw}, fwd, h);
}

double case_grid_sample(uint64_t seed, double h) {
    Rng rng(seed);
    auto image = random_tensor({1, 2, 5, 5}, rng);
    auto raw = random_tensor({4}, rng, -1.2, 1.2);
    Rng wrng(rng.fork());
    auto fwd = [&]() {
        auto box = crop_from_raw(raw, 0.6);
        auto grid = make_grid(box, 3, 3, 5, 5);
        Rng local(wrng.seed());
        return weighted_sum(grid_sample_bilinear(image, grid), local);
    };
    return check_inputs({image, raw}, fwd, h);
}

double case_convgru_step(uint64_t seed, double h) {
    Rng rng(seed);
    ConvGruCell cell(2, 2, rng);
    auto x = random_tensor({1, 2, 3, 3}, rng);
    auto hs = random_tensor({1, 2, 3, 3}, rng, -0.8, 0.8);
    Rng wrng(rng.fork());
    auto fwd = [&]() {
        Rng local(wrng.seed());
        return weighted_sum(convgru_step(cell, x, hs), local);
    };
    return check_inputs({x, hs, cell.w_z, cell.u_z, cell.b_z, cell.w_r, cell.u_r, cell.b_r,
                         cell.w_h, cell.u_h, cell.b_h},
                        fwd, h);
}

double case_bce_loss(uint64_t seed, double h) {
    Rng rng(seed);
    auto logits = random_tensor({3, 3}, rng, -2.0, 2.0);
    auto target = random_tensor({3, 3}, rng, 0.0, 1.0);
    return check_inputs({logits}, [&]() { return bce_loss(logits, target); }, h);
}

double case_iou_loss(uint64_t seed, double h) {
    Rng rng(seed);
    auto probs = random_tensor({4, 4}, rng, 0.05, 0.95);
    auto target = random_tensor({4, 4}, rng, 0.0, 1.0);
    return check_inputs({probs}, [&]() { return iou_loss(probs, target); }, h);
}

double case_recurrent_loss(uint64_t seed, double h) {
    Rng rng(seed);
    std::vector<TensorPtr> preds;
    for (int i = 0; i < 3; ++i) preds.push_back(random_tensor({2, 2}, rng, -2.0, 2.0));
    auto target = random_tensor({2, 2}, rng, 0.0, 1.0);
    double worst = 0.0;
    for (const auto& p : preds)
        worst = std::max(worst, check_inputs({p}, [&]() { return recurrent_loss(preds, target, 2.0); }, h));
    return worst;
}

const std::vector<OpCase>& op_cases() {
    static const std::vector<OpCase> cases = {
        {"conv2d", case_conv2d},
        {"maxpool2", case_maxpool2},
        {"fully_connected", case_fully_connected},
        {"logistic", [](uint64_t s, double h) { return case_activation(s, h, Act::Logistic); }},
        {"tanh", [](uint64_t s, double h) { return case_activation(s, h, Act::Tanh); }},
        {"relu", [](uint64_t s, double h) { return case_activation(s, h, Act::Relu); }},
        {"bilinear_resize", case_bilinear_resize},
        {"crop_from_raw", case_crop_from_raw},
        {"grid_sample", case_grid_sample},
        {"convgru_step", case_convgru_step},
        {"bce_loss", case_bce_loss},
        {"iou_loss", case_iou_loss},
        {"recurrent_loss", case_recurrent_loss},
    };
    return cases;
}

}  // namespace

std::vector<std::string> gradcheck_op_names() {
    std::vector<std::string> names;
    for (const auto& c : op_cases()) names.push_back(c.name);
    return names;
}

std::vector<GradCheckResult> run_gradcheck_suite(const std::string& op_filter, double h,
                                                 double tol) {
    std::vector<GradCheckResult> results;
    bool any = false;
    for (const auto& c : op_cases()) {
        if (!op_filter.empty() && c.name != op_filter) continue;
        any = true;
        double worst = 0.0;
        for (uint64_t seed : {11ULL, 22ULL, 33ULL}) worst = std::max(worst, c.run(seed, h));
        results.push_back({c.name, worst, worst < tol});
    }
    if (!any) throw std::invalid_argument("gradcheck: unknown op '" + op_filter + "'");
    return results;
}

}  // namespace sal
