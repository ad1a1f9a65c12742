#include "f2n/harness/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace f2n::harness {

double psnr(const Image& a, const Image& b) {
    if (!a.same_dims(b)) throw std::invalid_argument("psnr: dims differ");
    double mse = 0.0;
    for (std::size_t i = 0; i < a.px.size(); ++i) {
        double d = a.px[i] - b.px[i];
        mse += d * d;
    }
    mse /= static_cast<double>(a.px.size());
    if (mse <= 0.0) return kPsnrCap;
    return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

double sharpness_score(const Image& img) {
    auto luma = to_luma(img);
    const int h = img.h, w = img.w;
    // 3x3 Laplacian (4-neighbor), interior pixels only.
    std::vector<double> response;
    response.reserve(static_cast<std::size_t>(std::max(0, (h - 2) * (w - 2))));
    for (int y = 1; y + 1 < h; ++y) {
        for (int x = 1; x + 1 < w; ++x) {
            double v = -4.0 * luma[static_cast<std::size_t>(y) * w + x] +
                       luma[static_cast<std::size_t>(y - 1) * w + x] +
                       luma[static_cast<std::size_t>(y + 1) * w + x] +
                       luma[static_cast<std::size_t>(y) * w + x - 1] +
                       luma[static_cast<std::size_t>(y) * w + x + 1];
            response.push_back(v);
        }
    }
    if (response.empty()) return 0.0;
    double mean = 0.0;
    for (double v : response) mean += v;
    mean /= static_cast<double>(response.size());
    double var = 0.0;
    for (double v : response) var += (v - mean) * (v - mean);
    return var / static_cast<double>(response.size());
}

double mean_abs_diff(const Image& a, const Image& b) {
    if (!a.same_dims(b)) throw std::invalid_argument("mean_abs_diff: dims differ");
    double s = 0.0;
    for (std::size_t i = 0; i < a.px.size(); ++i) s += std::fabs(a.px[i] - b.px[i]);
    return s / static_cast<double>(a.px.size());
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.empty()) throw std::invalid_argument("pearson: size mismatch");
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cov += (a[i] - ma) * (b[i] - mb);
        va += (a[i] - ma) * (a[i] - ma);
        vb += (b[i] - mb) * (b[i] - mb);
    }
    if (va <= 0.0 || vb <= 0.0) return 0.0;
    return cov / std::sqrt(va * vb);
}

}  // namespace f2n::harness
