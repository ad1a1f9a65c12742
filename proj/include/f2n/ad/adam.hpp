#pragma once

#include "f2n/ad/param_set.hpp"

namespace f2n::ad {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.5;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// First/second moment buffers, one pair per parameter, plus the timestep.
struct AdamState {
    std::vector<std::vector<double>> m;
    std::vector<std::vector<double>> v;
    long t = 0;

    static AdamState init_for(const ParamSet& params);
    bool matches(const ParamSet& params) const;
};

/// One bias-corrected Adam update. Returns a fresh ParamSet (the input set is
/// not mutated); state is advanced in place.
ParamSet adam_step(const ParamSet& params, const std::vector<Tensor>& grads, AdamState& state,
                   const AdamConfig& cfg);

}  // namespace f2n::ad
