#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "f2n/ad/tensor.hpp"

namespace f2n::ad {

/// Named, ordered collection of trainable tensors for one network.
/// Forward functions take a ParamSet by const reference, so a network can be
/// evaluated at a functionally shifted set (e.g. theta - alpha*g) without
/// touching the original.
class ParamSet {
public:
    void add(std::string name, Tensor t);
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }

    const Tensor& get(const std::string& name) const;
    const Tensor& at(std::size_t i) const { return items_[i].second; }
    Tensor& at(std::size_t i) { return items_[i].second; }
    const std::string& name(std::size_t i) const { return items_[i].first; }

    std::vector<Tensor> tensors() const;
    std::int64_t num_values() const;

    /// Same names, freshly copied leaf tensors (requires_grad as given).
    ParamSet clone(bool requires_grad) const;

    /// FNV-1a over names and raw value bytes; detects any mutation.
    std::uint64_t checksum() const;

    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }

private:
    std::vector<std::pair<std::string, Tensor>> items_;
};

}  // namespace f2n::ad
