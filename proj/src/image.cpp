#include "f2n/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace f2n {

namespace {

int reflect101(int i, int n) {
    if (n == 1) return 0;
    while (i < 0 || i >= n) {
        if (i < 0) i = -i;
        if (i >= n) i = 2 * n - 2 - i;
    }
    return i;
}

struct Tap {
    int idx;
    double weight;
};

double cubic_kernel(double t) {
    constexpr double a = -0.5;
    t = std::fabs(t);
    if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
    if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
    return 0.0;
}

std::vector<std::vector<Tap>> make_taps(int in, int out, ResampleFilter filter) {
    std::vector<std::vector<Tap>> taps(static_cast<std::size_t>(out));
    const double scale = static_cast<double>(in) / out;
    for (int j = 0; j < out; ++j) {
        auto& t = taps[static_cast<std::size_t>(j)];
        switch (filter) {
            case ResampleFilter::nearest: {
                int i = static_cast<int>(std::floor((j + 0.5) * scale));
                t.push_back({std::clamp(i, 0, in - 1), 1.0});
                break;
            }
            case ResampleFilter::bilinear: {
                double src = (j + 0.5) * scale - 0.5;
                int i0 = static_cast<int>(std::floor(src));
                double f = src - i0;
                t.push_back({std::clamp(i0, 0, in - 1), 1.0 - f});
                t.push_back({std::clamp(i0 + 1, 0, in - 1), f});
                break;
            }
            case ResampleFilter::bicubic: {
                double src = (j + 0.5) * scale - 0.5;
                int i0 = static_cast<int>(std::floor(src));
                for (int k = -1; k <= 2; ++k) {
                    double wgt = cubic_kernel(src - (i0 + k));
                    if (wgt != 0.0) t.push_back({std::clamp(i0 + k, 0, in - 1), wgt});
                }
                break;
            }
            case ResampleFilter::area: {
                double lo = j * scale, hi = (j + 1) * scale;
                int ilo = static_cast<int>(std::floor(lo));
                int ihi = static_cast<int>(std::ceil(hi)) - 1;
                double total = 0.0;
                for (int i = ilo; i <= ihi; ++i) {
                    double cover = std::min(hi, i + 1.0) - std::max(lo, static_cast<double>(i));
                    if (cover <= 0.0) continue;
                    t.push_back({std::clamp(i, 0, in - 1), cover});
                    total += cover;
                }
                for (auto& tap : t) tap.weight /= total;
                break;
            }
        }
    }
    return taps;
}

}  // namespace

Image clip01(Image img) {
    for (double& v : img.px) v = std::clamp(v, 0.0, 1.0);
    return img;
}

Image crop(const Image& img, int y0, int x0, int h, int w) {
    if (y0 < 0 || x0 < 0 || y0 + h > img.h || x0 + w > img.w) {
        throw std::out_of_range("crop: rect out of bounds");
    }
    Image out(img.c, h, w);
    for (int ci = 0; ci < img.c; ++ci) {
        for (int y = 0; y < h; ++y) {
            const double* src = &img.px[(static_cast<std::size_t>(ci) * img.h + y0 + y) * img.w + x0];
            std::copy_n(src, w, &out.px[(static_cast<std::size_t>(ci) * h + y) * w]);
        }
    }
    return out;
}

Image resize(const Image& img, int out_h, int out_w, ResampleFilter filter) {
    if (out_h <= 0 || out_w <= 0) throw std::invalid_argument("resize: bad output dims");
    auto col_taps = make_taps(img.w, out_w, filter);
    auto row_taps = make_taps(img.h, out_h, filter);

    // Horizontal pass, then vertical.
    Image mid(img.c, img.h, out_w);
    for (int ci = 0; ci < img.c; ++ci) {
        for (int y = 0; y < img.h; ++y) {
            const double* src = &img.px[(static_cast<std::size_t>(ci) * img.h + y) * img.w];
            double* dst = &mid.px[(static_cast<std::size_t>(ci) * img.h + y) * out_w];
            for (int x = 0; x < out_w; ++x) {
                double acc = 0.0;
                for (const Tap& t : col_taps[static_cast<std::size_t>(x)]) {
                    acc += t.weight * src[t.idx];
                }
                dst[x] = acc;
            }
        }
    }
    Image out(img.c, out_h, out_w);
    for (int ci = 0; ci < img.c; ++ci) {
        for (int y = 0; y < out_h; ++y) {
            double* dst = &out.px[(static_cast<std::size_t>(ci) * out_h + y) * out_w];
            for (const Tap& t : row_taps[static_cast<std::size_t>(y)]) {
                const double* src = &mid.px[(static_cast<std::size_t>(ci) * img.h + t.idx) * out_w];
                for (int x = 0; x < out_w; ++x) dst[x] += t.weight * src[x];
            }
        }
    }
    return out;
}

Image convolve_reflect(const Image& img, const std::vector<double>& kernel, int ksize) {
    if (ksize % 2 == 0 || static_cast<int>(kernel.size()) != ksize * ksize) {
        throw std::invalid_argument("convolve_reflect: kernel must be odd square");
    }
    if (ksize > 2 * img.h - 1 || ksize > 2 * img.w - 1) {
        throw std::invalid_argument("convolve_reflect: kernel larger than image allows");
    }
    const int r = ksize / 2;
    Image out(img.c, img.h, img.w);
    for (int ci = 0; ci < img.c; ++ci) {
        for (int y = 0; y < img.h; ++y) {
            for (int x = 0; x < img.w; ++x) {
                double acc = 0.0;
                for (int ky = 0; ky < ksize; ++ky) {
                    int sy = reflect101(y + ky - r, img.h);
                    for (int kx = 0; kx < ksize; ++kx) {
                        int sx = reflect101(x + kx - r, img.w);
                        acc += kernel[static_cast<std::size_t>(ky) * ksize + kx] * img.at(ci, sy, sx);
                    }
                }
                out.at(ci, y, x) = acc;
            }
        }
    }
    return out;
}

std::vector<double> to_luma(const Image& img) {
    std::vector<double> luma(static_cast<std::size_t>(img.h) * img.w);
    if (img.c == 1) {
        luma.assign(img.px.begin(), img.px.end());
        return luma;
    }
    const std::size_t plane = luma.size();
    for (std::size_t i = 0; i < plane; ++i) {
        luma[i] = 0.299 * img.px[i] + 0.587 * img.px[plane + i] + 0.114 * img.px[2 * plane + i];
    }
    return luma;
}

ad::Tensor to_tensor(const Image& img, bool requires_grad) {
    return ad::Tensor::leaf({img.c, img.h, img.w}, img.px, requires_grad);
}

Image to_image(const ad::Tensor& t) {
    if (t.shape().size() != 3) throw std::invalid_argument("to_image: tensor must be [C,H,W]");
    Image img(t.shape()[0], t.shape()[1], t.shape()[2]);
    img.px = t.values();
    return img;
}

double max_abs_diff(const Image& a, const Image& b) {
    if (!a.same_dims(b)) throw std::invalid_argument("max_abs_diff: dims differ");
    double m = 0.0;
    for (std::size_t i = 0; i < a.px.size(); ++i) m = std::max(m, std::fabs(a.px[i] - b.px[i]));
    return m;
}

}  // namespace f2n
