#include "f2n/ad/adam.hpp"

#include <cmath>

namespace f2n::ad {

AdamState AdamState::init_for(const ParamSet& params) {
    AdamState st;
    st.m.reserve(params.size());
    st.v.reserve(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        st.m.emplace_back(params.at(i).values().size(), 0.0);
        st.v.emplace_back(params.at(i).values().size(), 0.0);
    }
    return st;
}

bool AdamState::matches(const ParamSet& params) const {
    if (m.size() != params.size() || v.size() != params.size()) return false;
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (m[i].size() != params.at(i).values().size()) return false;
        if (v[i].size() != params.at(i).values().size()) return false;
    }
    return true;
}

ParamSet adam_step(const ParamSet& params, const std::vector<Tensor>& grads, AdamState& state,
                   const AdamConfig& cfg) {
    if (grads.size() != params.size()) throw TensorError("adam_step: gradient count mismatch");
    if (!state.matches(params)) throw TensorError("adam_step: state dimensions do not match params");
    if (!(cfg.lr > 0.0)) throw TensorError("adam_step: lr must be > 0");

    state.t += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));

    ParamSet out;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const Tensor& p = params.at(i);
        const Tensor& g = grads[i];
        if (g.shape() != p.shape()) {
            throw TensorError("adam_step: gradient shape mismatch for '" + params.name(i) + "'");
        }
        std::vector<double> next(p.values());
        auto& mi = state.m[i];
        auto& vi = state.v[i];
        const auto& gv = g.values();
        for (std::size_t k = 0; k < next.size(); ++k) {
            mi[k] = cfg.beta1 * mi[k] + (1.0 - cfg.beta1) * gv[k];
            vi[k] = cfg.beta2 * vi[k] + (1.0 - cfg.beta2) * gv[k] * gv[k];
            const double mhat = mi[k] / bc1;
            const double vhat = vi[k] / bc2;
            next[k] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
            if (!std::isfinite(next[k])) throw TensorError("adam_step: non-finite update");
        }
        out.add(params.name(i), Tensor::leaf(p.shape(), std::move(next), true));
    }
    return out;
}

}  // namespace f2n::ad
