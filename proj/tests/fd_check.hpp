#pragma once

// Central finite-difference oracle for gradient checks. Lives in test code
// only; deliberately independent of the backward implementation it audits.

#include <cmath>
#include <functional>
#include <vector>

#include "f2n/ad/tensor.hpp"

namespace fd {

// d f / d x[i] via central differences, evaluated one element at a time.
// f must rebuild its graph from plain values on every call.
inline std::vector<double> gradient(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> x,
    double step = 1e-4) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double orig = x[i];
        x[i] = orig + step;
        const double fp = f(x);
        x[i] = orig - step;
        const double fm = f(x);
        x[i] = orig;
        g[i] = (fp - fm) / (2.0 * step);
    }
    return g;
}

// Max relative error between analytic and finite-difference gradients,
// with an absolute floor so near-zero entries do not blow up the ratio.
inline double max_rel_err(const std::vector<double>& analytic, const std::vector<double>& numeric,
                          double floor = 1e-6) {
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        double denom = std::max({std::fabs(analytic[i]), std::fabs(numeric[i]), floor});
        worst = std::max(worst, std::fabs(analytic[i] - numeric[i]) / denom);
    }
    return worst;
}

}  // namespace fd
