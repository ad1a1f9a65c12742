#include "f2n/ad/tensor.hpp"

#include <atomic>
#include <cmath>
#include <sstream>

namespace f2n::ad {

namespace {
std::atomic<std::uint64_t> g_next_id{1};
thread_local bool g_grad_enabled = true;

void check_finite(const char* op, const std::vector<double>& v) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw TensorError(std::string("non-finite value produced by op '") + op + "'");
        }
    }
}
}  // namespace

std::int64_t numel(const Shape& shape) {
    std::int64_t n = 1;
    for (int d : shape) n *= d;
    return n;
}

std::string shape_str(const Shape& shape) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) os << 'x';
        os << shape[i];
    }
    os << ']';
    return os.str();
}

bool GradMode::enabled() { return g_grad_enabled; }
void GradMode::set(bool on) { g_grad_enabled = on; }

Tensor Tensor::leaf(Shape shape, std::vector<double> values, bool requires_grad) {
    if (numel(shape) != static_cast<std::int64_t>(values.size())) {
        throw TensorError("leaf: value count does not match shape " + shape_str(shape));
    }
    check_finite("leaf", values);
    Tensor t;
    t.node_ = std::make_shared<TensorNode>();
    t.node_->shape = std::move(shape);
    t.node_->values = std::move(values);
    t.node_->requires_grad = requires_grad;
    t.node_->id = g_next_id.fetch_add(1);
    return t;
}

Tensor Tensor::scalar(double v, bool requires_grad) {
    return leaf(Shape{}, std::vector<double>{v}, requires_grad);
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) {
    std::vector<double> v(static_cast<std::size_t>(numel(shape)), 0.0);
    return leaf(std::move(shape), std::move(v), requires_grad);
}

Tensor Tensor::full(Shape shape, double val, bool requires_grad) {
    std::vector<double> v(static_cast<std::size_t>(numel(shape)), val);
    return leaf(std::move(shape), std::move(v), requires_grad);
}

double Tensor::item() const {
    if (size() != 1) throw TensorError("item(): tensor is not scalar, shape " + shape_str(shape()));
    return node_->values[0];
}

std::vector<double>& Tensor::mutable_values() {
    if (node_->vjp) throw TensorError("mutable_values(): only leaf tensors may be written");
    return node_->values;
}

Tensor make_node(const char* name, Shape shape, std::vector<double> values,
                 std::vector<Tensor> parents,
                 std::function<std::vector<Tensor>(const Tensor&)> vjp) {
    if (numel(shape) != static_cast<std::int64_t>(values.size())) {
        throw TensorError(std::string("op '") + name + "': value count does not match shape " +
                          shape_str(shape));
    }
    check_finite(name, values);
    Tensor t;
    t.node_ = std::make_shared<TensorNode>();
    t.node_->shape = std::move(shape);
    t.node_->values = std::move(values);
    t.node_->op_name = name;
    t.node_->id = g_next_id.fetch_add(1);
    bool record = false;
    if (GradMode::enabled()) {
        for (const Tensor& p : parents) {
            if (p.requires_grad()) {
                record = true;
                break;
            }
        }
    }
    if (record) {
        t.node_->requires_grad = true;
        t.node_->parents = std::move(parents);
        t.node_->vjp = std::move(vjp);
    }
    return t;
}

Tensor detach(const Tensor& x) {
    Tensor t;
    t.node_ = std::make_shared<TensorNode>();
    t.node_->shape = x.shape();
    t.node_->values = x.values();
    t.node_->id = g_next_id.fetch_add(1);
    return t;
}

}  // namespace f2n::ad
