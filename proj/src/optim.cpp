#include "sal/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace sal {

TensorPtr xavier_init(const Shape& shape, Rng& rng) {
    if (shape.empty()) throw std::invalid_argument("xavier_init: empty shape");
    for (int64_t e : shape)
        if (e <= 0) throw std::invalid_argument("xavier_init: zero extent in " + shape_str(shape));
    double fan_in = 0.0, fan_out = 0.0;
    switch (shape.size()) {
        case 1:
            fan_in = fan_out = static_cast<double>(shape[0]);
            break;
        case 2:
            fan_out = static_cast<double>(shape[0]);
            fan_in = static_cast<double>(shape[1]);
            break;
        case 4: {
            const double area = static_cast<double>(shape[2] * shape[3]);
            fan_out = static_cast<double>(shape[0]) * area;
            fan_in = static_cast<double>(shape[1]) * area;
            break;
        }
        default:
            throw std::invalid_argument("xavier_init: unsupported rank " +
                                        std::to_string(shape.size()));
    }
    const double a = std::sqrt(6.0 / (fan_in + fan_out));
    auto t = Tensor::create(shape);
    for (auto& v : t->values) v = rng.uniform(-a, a);
    return t;
}

AdamState AdamState::for_param(const Tensor& param, double lr) {
    AdamState st;
    st.m.assign(param.values.size(), 0.0);
    st.v.assign(param.values.size(), 0.0);
    st.lr = lr;
    return st;
}

void adam_step(Tensor& param, AdamState& state) {
    if (param.grad.size() != param.values.size())
        throw std::invalid_argument("adam_step: parameter has no gradient");
    if (state.m.size() != param.values.size() || state.v.size() != param.values.size())
        throw std::invalid_argument("adam_step: state shape mismatch");
    state.t += 1;
    const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    const size_t n = param.values.size();
    for (size_t i = 0; i < n; ++i) {
        const double g = param.grad[i];
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
        const double mhat = state.m[i] / c1;
        const double vhat = state.v[i] / c2;
        param.values[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
    }
}

void AdamOptimizer::add_group(const std::vector<NamedTensor>& params, double lr) {
    const size_t group = lrs_.size();
    lrs_.push_back(lr);
    for (const auto& p : params) {
        entries_.push_back({p.tensor, AdamState::for_param(*p.tensor, lr), group});
    }
}

void AdamOptimizer::step() {
    for (auto& e : entries_) {
        e.state.lr = lrs_[e.group];
        adam_step(*e.param, e.state);
    }
}

void AdamOptimizer::zero_grad() {
    for (auto& e : entries_) {
        e.param->ensure_grad();
        e.param->zero_grad();
    }
}

void AdamOptimizer::scale_lr(double factor) {
    for (auto& lr : lrs_) lr *= factor;
}

std::vector<double> AdamOptimizer::group_lrs() const { return lrs_; }

}  // namespace sal
