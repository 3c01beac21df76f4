#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace tempocast {

using Shape = std::vector<int>;

std::string shape_str(const Shape& s);
std::size_t shape_numel(const Shape& s);

namespace detail {

struct TensorNode {
    Shape shape;
    std::vector<double> value;
    std::vector<double> grad;  // allocated only while requires_grad
    bool requires_grad = false;

    std::size_t numel() const { return value.size(); }
    void enable_grad() {
        requires_grad = true;
        grad.assign(value.size(), 0.0);
    }
};

}  // namespace detail

/// Dense n-dimensional array of doubles, row-major. Cheap to copy (handle
/// semantics); value and gradient buffers live on a shared node so that the
/// tape can reach them during the reverse sweep.
class Tensor {
public:
    Tensor() = default;

    static Tensor zeros(Shape shape, bool requires_grad = false);
    static Tensor full(Shape shape, double fill, bool requires_grad = false);
    static Tensor from_values(Shape shape, std::vector<double> values, bool requires_grad = false);
    static Tensor scalar(double v, bool requires_grad = false);

    bool defined() const { return node_ != nullptr; }
    const Shape& shape() const { return node_->shape; }
    int dim(int axis) const { return node_->shape[static_cast<std::size_t>(axis)]; }
    int rank() const { return static_cast<int>(node_->shape.size()); }
    std::size_t numel() const { return node_->value.size(); }
    bool requires_grad() const { return node_->requires_grad; }

    const std::vector<double>& values() const { return node_->value; }
    std::vector<double>& mutable_values() { return node_->value; }
    const std::vector<double>& grad() const { return node_->grad; }
    std::vector<double>& mutable_grad() { return node_->grad; }

    /// Value of a single-element tensor.
    double item() const;

    /// Turns this tensor into a trainable leaf (allocates the grad buffer).
    void set_requires_grad();
    void zero_grad();

    std::shared_ptr<detail::TensorNode> node() const { return node_; }

private:
    explicit Tensor(std::shared_ptr<detail::TensorNode> n) : node_(std::move(n)) {}
    std::shared_ptr<detail::TensorNode> node_;

    friend class Graph;
    friend Tensor make_op_output(Shape, std::vector<double>, const std::vector<Tensor>&);
};

/// Dynamic tape: while an instance is alive on a thread, every primitive op
/// records the backward step needed to reverse it. Rebuilt per forward pass.
class Graph {
public:
    Graph();
    ~Graph();

    Graph(const Graph&) = delete;
    Graph& operator=(const Graph&) = delete;

    /// Seeds d(loss)/d(loss) = 1 and replays recorded steps in reverse
    /// execution order. Gradients of intermediate outputs are reset first;
    /// leaf gradients accumulate, so repeated calls without zeroing add up.
    void backward(const Tensor& loss);

    std::size_t size() const { return steps_.size(); }

    static Graph* current();

    void record(std::shared_ptr<detail::TensorNode> out, std::function<void()> back);

private:
    struct Step {
        std::shared_ptr<detail::TensorNode> out;
        std::function<void()> back;
    };
    std::vector<Step> steps_;
    Graph* prev_ = nullptr;
};

}  // namespace tempocast
