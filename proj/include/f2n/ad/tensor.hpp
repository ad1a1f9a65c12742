#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace f2n::ad {

using Shape = std::vector<int>;

std::int64_t numel(const Shape& shape);
std::string shape_str(const Shape& shape);

class Tensor;

/// One node of the computation graph. Nodes are created through the op
/// functions in ops.hpp and never mutated afterwards; backward walks the
/// parent edges in reverse creation order.
struct TensorNode {
    Shape shape;
    std::vector<double> values;
    bool requires_grad = false;
    const char* op_name = "leaf";
    std::vector<Tensor> parents;
    // Returns one gradient per parent (empty Tensor for no-grad parents).
    std::function<std::vector<Tensor>(const Tensor& grad_out)> vjp;
    std::uint64_t id = 0;
};

/// Shared handle to an immutable graph node.
class Tensor {
public:
    Tensor() = default;

    static Tensor leaf(Shape shape, std::vector<double> values, bool requires_grad = false);
    static Tensor scalar(double v, bool requires_grad = false);
    static Tensor zeros(Shape shape, bool requires_grad = false);
    static Tensor full(Shape shape, double v, bool requires_grad = false);

    bool defined() const { return node_ != nullptr; }
    const Shape& shape() const { return node_->shape; }
    std::int64_t size() const { return static_cast<std::int64_t>(node_->values.size()); }
    const std::vector<double>& values() const { return node_->values; }
    bool requires_grad() const { return node_ && node_->requires_grad; }
    const char* op_name() const { return node_->op_name; }
    std::uint64_t id() const { return node_->id; }
    double item() const;
    double at(std::int64_t i) const { return node_->values[static_cast<std::size_t>(i)]; }

    TensorNode* node() const { return node_.get(); }

    /// Leaf-only write access used by initializers and the optimizer.
    std::vector<double>& mutable_values();

    friend Tensor make_node(const char* name, Shape shape, std::vector<double> values,
                            std::vector<Tensor> parents,
                            std::function<std::vector<Tensor>(const Tensor&)> vjp);
    friend Tensor detach(const Tensor& x);

private:
    std::shared_ptr<TensorNode> node_;
};

/// Thread-local flag controlling whether ops record graph edges.
class GradMode {
public:
    static bool enabled();
    static void set(bool on);
};

/// RAII guard forcing grad recording on or off within a scope.
class GradGuard {
public:
    explicit GradGuard(bool on) : prev_(GradMode::enabled()) { GradMode::set(on); }
    ~GradGuard() { GradMode::set(prev_); }
    GradGuard(const GradGuard&) = delete;
    GradGuard& operator=(const GradGuard&) = delete;

private:
    bool prev_;
};

/// Central op constructor: validates finiteness, assigns ids, and drops the
/// graph record when recording is off or no parent needs grad.
Tensor make_node(const char* name, Shape shape, std::vector<double> values,
                 std::vector<Tensor> parents,
                 std::function<std::vector<Tensor>(const Tensor&)> vjp);

/// Same values, no graph history.
Tensor detach(const Tensor& x);

struct TensorError : std::runtime_error {
    explicit TensorError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace f2n::ad
