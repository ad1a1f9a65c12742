#include "f2n/ad/backward.hpp"

#include "f2n/ad/ops.hpp"

namespace f2n::ad {

GradientTape::GradientTape(const Tensor& root, Mode mode) : root_(root), mode_(mode) {
    if (!root.defined()) throw TensorError("GradientTape: undefined root");
    // Iterative post-order DFS over grad-requiring parents; each node is
    // recorded exactly once.
    std::unordered_map<const TensorNode*, bool> state;  // false=open, true=done
    std::vector<TensorNode*> stack{root.node()};
    while (!stack.empty()) {
        TensorNode* n = stack.back();
        auto it = state.find(n);
        if (it == state.end()) {
            state.emplace(n, false);
            for (const Tensor& p : n->parents) {
                if (p.requires_grad() && !state.count(p.node())) stack.push_back(p.node());
            }
        } else if (!it->second) {
            it->second = true;
            stack.pop_back();
            order_.push_back(n);
        } else {
            stack.pop_back();
        }
    }
}

std::vector<Tensor> GradientTape::gradients(const std::vector<Tensor>& wrt,
                                            std::vector<bool>* reached) {
    if (root_.size() != 1) {
        throw TensorError("backward: root must be scalar, got shape " + shape_str(root_.shape()));
    }
    GradGuard guard(mode_ == Mode::create_graph);
    std::unordered_map<const TensorNode*, Tensor> grad_of;
    grad_of.emplace(root_.node(), Tensor::full(root_.shape(), 1.0));

    for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
        TensorNode* n = *it;
        auto git = grad_of.find(n);
        if (git == grad_of.end() || !n->vjp) continue;
        std::vector<Tensor> pgrads = n->vjp(git->second);
        if (pgrads.size() != n->parents.size()) {
            throw TensorError(std::string("vjp of '") + n->op_name +
                              "' returned wrong number of gradients");
        }
        for (std::size_t i = 0; i < pgrads.size(); ++i) {
            const Tensor& p = n->parents[i];
            if (!p.requires_grad() || !pgrads[i].defined()) continue;
            auto existing = grad_of.find(p.node());
            if (existing == grad_of.end()) {
                grad_of.emplace(p.node(), pgrads[i]);
            } else {
                existing->second = add(existing->second, pgrads[i]);
            }
        }
    }

    std::vector<Tensor> out;
    out.reserve(wrt.size());
    if (reached) reached->assign(wrt.size(), false);
    for (std::size_t i = 0; i < wrt.size(); ++i) {
        auto it = grad_of.find(wrt[i].node());
        if (it != grad_of.end()) {
            out.push_back(it->second);
            if (reached) (*reached)[i] = true;
        } else {
            out.push_back(Tensor::zeros(wrt[i].shape()));
        }
    }
    return out;
}

std::vector<Tensor> backward(const Tensor& loss, const std::vector<Tensor>& wrt, bool create_graph,
                             std::vector<bool>* reached) {
    GradientTape tape(loss, create_graph ? GradientTape::Mode::create_graph
                                         : GradientTape::Mode::first_order);
    return tape.gradients(wrt, reached);
}

}  // namespace f2n::ad
