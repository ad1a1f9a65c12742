#pragma once

#include <unordered_map>

#include "f2n/ad/tensor.hpp"

namespace f2n::ad {

/// Reverse-topological op record of everything reachable from one root.
/// In create-graph mode the produced gradients are themselves graph nodes,
/// so a second backward pass through them yields second-order gradients.
class GradientTape {
public:
    enum class Mode { first_order, create_graph };

    GradientTape(const Tensor& root, Mode mode);

    /// Runs the backward sweep once and returns d(root)/d(t) for each t.
    /// A wrt tensor not reachable from the root yields zeros; `reached`,
    /// when given, records which ones actually received gradient.
    std::vector<Tensor> gradients(const std::vector<Tensor>& wrt,
                                  std::vector<bool>* reached = nullptr);

    std::size_t num_records() const { return order_.size(); }

private:
    Tensor root_;
    Mode mode_;
    std::vector<TensorNode*> order_;  // topological, root last
};

/// Gradient of a scalar loss with respect to each tensor in wrt.
std::vector<Tensor> backward(const Tensor& loss, const std::vector<Tensor>& wrt,
                             bool create_graph = false, std::vector<bool>* reached = nullptr);

}  // namespace f2n::ad
