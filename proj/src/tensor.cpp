#include "sal/tensor.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_set>
#include <utility>

namespace sal {

int64_t shape_numel(const Shape& shape) {
    int64_t n = 1;
    for (int64_t e : shape) n *= e;
    return n;
}

std::string shape_str(const Shape& shape) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < shape.size(); ++i) {
        if (i) os << ",";
        os << shape[i];
    }
    os << "]";
    return os.str();
}

static void check_shape(const Shape& shape) {
    if (shape.empty()) throw std::invalid_argument("tensor: empty shape");
    for (int64_t e : shape) {
        if (e <= 0) throw std::invalid_argument("tensor: non-positive extent in " + shape_str(shape));
    }
}

TensorPtr Tensor::create(Shape shape, bool requires_grad) {
    check_shape(shape);
    auto t = std::make_shared<Tensor>();
    t->values.assign(static_cast<size_t>(shape_numel(shape)), 0.0);
    t->shape = std::move(shape);
    t->requires_grad = requires_grad;
    t->needs_grad = requires_grad;
    return t;
}

TensorPtr Tensor::from(Shape shape, std::vector<double> values, bool requires_grad) {
    check_shape(shape);
    if (static_cast<int64_t>(values.size()) != shape_numel(shape))
        throw std::invalid_argument("tensor: value count does not match shape " + shape_str(shape));
    auto t = std::make_shared<Tensor>();
    t->shape = std::move(shape);
    t->values = std::move(values);
    t->requires_grad = requires_grad;
    t->needs_grad = requires_grad;
    return t;
}

TensorPtr Tensor::full(Shape shape, double value, bool requires_grad) {
    auto t = create(std::move(shape), requires_grad);
    std::fill(t->values.begin(), t->values.end(), value);
    return t;
}

TensorPtr Tensor::zeros(Shape shape, bool requires_grad) {
    return create(std::move(shape), requires_grad);
}

TensorPtr Tensor::scalar(double value) {
    return from({1}, {value});
}

double Tensor::item() const {
    if (numel() != 1) throw std::invalid_argument("item: tensor has " + std::to_string(numel()) + " elements");
    return values[0];
}

void Tensor::set_trainable(bool on) {
    if (!is_leaf()) throw std::invalid_argument("set_trainable: only leaf tensors can be flagged");
    requires_grad = on;
    needs_grad = on;
}

void Tensor::ensure_grad() {
    if (grad.empty()) grad.assign(values.size(), 0.0);
}

void Tensor::zero_grad() {
    std::fill(grad.begin(), grad.end(), 0.0);
}

void Tensor::accumulate_grad(const double* g, int64_t n) {
    ensure_grad();
    for (int64_t i = 0; i < n; ++i) grad[static_cast<size_t>(i)] += g[i];
}

double* Tensor::plane(int64_t n, int64_t c) {
    const int64_t hw = shape[2] * shape[3];
    return values.data() + (n * shape[1] + c) * hw;
}

const double* Tensor::plane(int64_t n, int64_t c) const {
    const int64_t hw = shape[2] * shape[3];
    return values.data() + (n * shape[1] + c) * hw;
}

double* Tensor::grad_plane(int64_t n, int64_t c) {
    const int64_t hw = shape[2] * shape[3];
    return grad.data() + (n * shape[1] + c) * hw;
}

TensorPtr Tensor::clone_detached() const {
    return Tensor::from(shape, values);
}

void attach_op(const TensorPtr& out, std::vector<TensorPtr> parents,
               std::function<void(Tensor&)> backward) {
    bool needs = false;
    for (const auto& p : parents) needs = needs || p->needs_grad;
    if (!needs) return;
    out->needs_grad = true;
    out->parents = std::move(parents);
    out->backward_fn = std::move(backward);
}

void backward(const TensorPtr& loss) {
    if (!loss) throw std::invalid_argument("backward: null loss");
    if (loss->numel() != 1) throw std::invalid_argument("backward: loss must be a scalar, got " + shape_str(loss->shape));

    // Postorder DFS over parents; reversed, every node precedes its parents,
    // so a node's grad is complete before its closure runs.
    std::vector<Tensor*> order;
    std::unordered_set<Tensor*> seen;
    struct Frame {
        Tensor* node;
        size_t next;
    };
    std::vector<Frame> stack;
    stack.push_back({loss.get(), 0});
    seen.insert(loss.get());
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next < f.node->parents.size()) {
            Tensor* p = f.node->parents[f.next++].get();
            if (seen.insert(p).second) stack.push_back({p, 0});
        } else {
            order.push_back(f.node);
            stack.pop_back();
        }
    }

    // Interior grads are per-call scratch; only leaves accumulate across calls.
    for (Tensor* node : order) {
        if (!node->is_leaf()) {
            node->ensure_grad();
            node->zero_grad();
        }
    }
    loss->ensure_grad();
    if (loss->is_leaf()) {
        loss->grad[0] += 1.0;
        return;
    }
    loss->grad[0] = 1.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        Tensor* node = *it;
        if (node->backward_fn && !node->grad.empty()) node->backward_fn(*node);
    }
}

}  // namespace sal
