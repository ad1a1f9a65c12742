#include "f2n/ad/param_set.hpp"

#include <cstring>

namespace f2n::ad {

void ParamSet::add(std::string name, Tensor t) {
    for (const auto& [n, _] : items_) {
        if (n == name) throw TensorError("ParamSet: duplicate name '" + name + "'");
    }
    items_.emplace_back(std::move(name), std::move(t));
}

const Tensor& ParamSet::get(const std::string& name) const {
    for (const auto& [n, t] : items_) {
        if (n == name) return t;
    }
    throw TensorError("ParamSet: no parameter named '" + name + "'");
}

std::vector<Tensor> ParamSet::tensors() const {
    std::vector<Tensor> out;
    out.reserve(items_.size());
    for (const auto& [_, t] : items_) out.push_back(t);
    return out;
}

std::int64_t ParamSet::num_values() const {
    std::int64_t n = 0;
    for (const auto& [_, t] : items_) n += t.size();
    return n;
}

ParamSet ParamSet::clone(bool requires_grad) const {
    ParamSet out;
    for (const auto& [n, t] : items_) {
        out.add(n, Tensor::leaf(t.shape(), t.values(), requires_grad));
    }
    return out;
}

std::uint64_t ParamSet::checksum() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const void* data, std::size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 1099511628211ull;
        }
    };
    for (const auto& [n, t] : items_) {
        mix(n.data(), n.size());
        mix(t.values().data(), t.values().size() * sizeof(double));
    }
    return h;
}

}  // namespace f2n::ad
