#include "tempocast/tensor.hpp"

#include <sstream>

#include "tempocast/error.hpp"

namespace tempocast {

std::string shape_str(const Shape& s) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) os << "x";
        os << s[i];
    }
    os << "]";
    return os.str();
}

std::size_t shape_numel(const Shape& s) {
    std::size_t n = 1;
    for (int d : s) {
        if (d <= 0) throw ShapeError("non-positive dimension in shape " + shape_str(s));
        n *= static_cast<std::size_t>(d);
    }
    return n;
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) {
    return full(std::move(shape), 0.0, requires_grad);
}

Tensor Tensor::full(Shape shape, double fill, bool requires_grad) {
    auto node = std::make_shared<detail::TensorNode>();
    std::size_t n = shape_numel(shape);
    node->shape = std::move(shape);
    node->value.assign(n, fill);
    if (requires_grad) node->enable_grad();
    return Tensor(std::move(node));
}

Tensor Tensor::from_values(Shape shape, std::vector<double> values, bool requires_grad) {
    if (shape_numel(shape) != values.size())
        throw ShapeError("value count " + std::to_string(values.size()) + " does not fill shape " +
                         shape_str(shape));
    auto node = std::make_shared<detail::TensorNode>();
    node->shape = std::move(shape);
    node->value = std::move(values);
    if (requires_grad) node->enable_grad();
    return Tensor(std::move(node));
}

Tensor Tensor::scalar(double v, bool requires_grad) {
    return from_values(Shape{1}, {v}, requires_grad);
}

double Tensor::item() const {
    if (numel() != 1)
        throw ContractError("item() on tensor of shape " + shape_str(shape()));
    return node_->value[0];
}

void Tensor::set_requires_grad() {
    if (!node_->requires_grad) node_->enable_grad();
}

void Tensor::zero_grad() {
    if (node_->requires_grad) node_->grad.assign(node_->value.size(), 0.0);
}

namespace {
thread_local Graph* t_current_graph = nullptr;
}

Graph::Graph() : prev_(t_current_graph) { t_current_graph = this; }

Graph::~Graph() { t_current_graph = prev_; }

Graph* Graph::current() { return t_current_graph; }

void Graph::record(std::shared_ptr<detail::TensorNode> out, std::function<void()> back) {
    steps_.push_back(Step{std::move(out), std::move(back)});
}

void Graph::backward(const Tensor& loss) {
    if (!loss.defined() || loss.numel() != 1)
        throw ContractError("backward requires a scalar loss, got shape " +
                            (loss.defined() ? shape_str(loss.shape()) : std::string("<empty>")));
    // Intermediate results are owned by this tape; reset their gradients so a
    // fresh sweep does not mix with a previous one. Leaves keep accumulating.
    for (auto& s : steps_)
        if (s.out->requires_grad) s.out->grad.assign(s.out->value.size(), 0.0);
    auto ln = loss.node();
    if (!ln->requires_grad) return;  // loss does not depend on any tracked tensor
    ln->grad[0] += 1.0;
    for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) it->back();
}

}  // namespace tempocast
