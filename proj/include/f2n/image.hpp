#pragma once

#include <vector>

#include "f2n/ad/tensor.hpp"

namespace f2n {

enum class ResampleFilter { nearest, bilinear, bicubic, area };

/// Planar CHW image with real-valued pixels, nominally in [0,1].
struct Image {
    int c = 0, h = 0, w = 0;
    std::vector<double> px;

    Image() = default;
    Image(int c_, int h_, int w_, double fill = 0.0)
        : c(c_), h(h_), w(w_), px(static_cast<std::size_t>(c_) * h_ * w_, fill) {}

    double& at(int ci, int y, int x) { return px[(static_cast<std::size_t>(ci) * h + y) * w + x]; }
    double at(int ci, int y, int x) const {
        return px[(static_cast<std::size_t>(ci) * h + y) * w + x];
    }
    std::size_t size() const { return px.size(); }
    bool same_dims(const Image& o) const { return c == o.c && h == o.h && w == o.w; }
};

Image clip01(Image img);
Image crop(const Image& img, int y0, int x0, int h, int w);

/// Resize to exact output dims; pixel-center alignment, edge clamp.
Image resize(const Image& img, int out_h, int out_w, ResampleFilter filter);

/// Per-channel 2-d convolution with an odd square kernel, reflect padding.
Image convolve_reflect(const Image& img, const std::vector<double>& kernel, int ksize);

/// BT.601 full-range luma (also the grayscale conversion used by metrics).
std::vector<double> to_luma(const Image& img);

ad::Tensor to_tensor(const Image& img, bool requires_grad = false);
Image to_image(const ad::Tensor& t);

double max_abs_diff(const Image& a, const Image& b);

}  // namespace f2n
