#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace sal {

using Shape = std::vector<int64_t>;

int64_t shape_numel(const Shape& shape);
std::string shape_str(const Shape& shape);

class Tensor;
using TensorPtr = std::shared_ptr<Tensor>;

/// Dense 64-bit float tensor, row-major; 4-D data is laid out NCHW.
///
/// A tensor doubles as a node in the reverse-mode differentiation graph:
/// op outputs hold their parents and a backward closure, and the graph is
/// rebuilt on every forward pass (define-by-run). Leaf gradients accumulate
/// additively across backward calls; callers zero them between steps.
class Tensor : public std::enable_shared_from_this<Tensor> {
public:
    Shape shape;
    std::vector<double> values;
    std::vector<double> grad;    // empty until a backward pass reaches this node
    bool requires_grad = false;  // trainable leaf
    bool needs_grad = false;     // a trainable tensor is reachable through this node

    std::vector<TensorPtr> parents;
    std::function<void(Tensor&)> backward_fn;

    static TensorPtr create(Shape shape, bool requires_grad = false);
    static TensorPtr from(Shape shape, std::vector<double> values, bool requires_grad = false);
    static TensorPtr full(Shape shape, double value, bool requires_grad = false);
    static TensorPtr zeros(Shape shape, bool requires_grad = false);
    static TensorPtr scalar(double value);

    int64_t numel() const { return static_cast<int64_t>(values.size()); }
    bool is_leaf() const { return parents.empty(); }

    /// Value of a single-element tensor.
    double item() const;

    /// Flags a leaf as trainable. Op outputs derive needs_grad from their
    /// parents at construction, so flip this before building the graph.
    void set_trainable(bool on);

    void ensure_grad();
    void zero_grad();
    void accumulate_grad(const double* g, int64_t n);

    // NCHW helpers
    int64_t dim(size_t i) const { return shape[i]; }
    double* plane(int64_t n, int64_t c);
    const double* plane(int64_t n, int64_t c) const;
    double* grad_plane(int64_t n, int64_t c);

    TensorPtr clone_detached() const;
};

/// Links an op output to its parents. The closure reads out.grad and
/// accumulates into parents that need gradients; it is dropped entirely when
/// no parent does, pruning dead branches from the sweep.
void attach_op(const TensorPtr& out, std::vector<TensorPtr> parents,
               std::function<void(Tensor&)> backward);

/// Reverse topological sweep from a scalar loss. Scratch gradients of
/// interior nodes are reset per call; leaf gradients accumulate.
void backward(const TensorPtr& loss);

struct NamedTensor {
    std::string name;
    TensorPtr tensor;
};

}  // namespace sal
