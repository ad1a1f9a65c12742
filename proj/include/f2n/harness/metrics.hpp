#pragma once

#include "f2n/image.hpp"

namespace f2n::harness {

/// 10*log10(1/MSE) over all channels; identical images return the 99 dB cap.
double psnr(const Image& a, const Image& b);

inline constexpr double kPsnrCap = 99.0;

/// Variance of the 3x3 Laplacian response on luma; higher means sharper.
double sharpness_score(const Image& img);

double mean_abs_diff(const Image& a, const Image& b);

/// Pearson correlation between two equally sized value sequences.
double pearson(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace f2n::harness
