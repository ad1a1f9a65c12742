#include "f2n/ad/ops.hpp"

#include <algorithm>
#include <cmath>

namespace f2n::ad {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw TensorError(msg);
}

void require_same_shape(const char* op, const Tensor& a, const Tensor& b) {
    require(a.shape() == b.shape(), std::string(op) + ": shape mismatch " + shape_str(a.shape()) +
                                        " vs " + shape_str(b.shape()));
}

void require_chw(const char* op, const Tensor& x) {
    require(x.shape().size() == 3, std::string(op) + ": expected [C,H,W], got " + shape_str(x.shape()));
}

double stable_sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    double e = std::exp(x);
    return e / (1.0 + e);
}

double stable_softplus(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

// Valid output range for one kernel offset k: 0 <= o*stride + k - pad < extent.
struct OffRange {
    int lo, hi;  // inclusive
    bool empty() const { return lo > hi; }
};

OffRange valid_range(int k, int pad, int stride, int extent, int out_extent) {
    int lo = 0;
    if (pad - k > 0) lo = (pad - k + stride - 1) / stride;
    int top = extent - 1 - k + pad;
    int hi = top < 0 ? -1 : top / stride;
    hi = std::min(hi, out_extent - 1);
    return {lo, hi};
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
    require_same_shape("add", a, b);
    std::vector<double> v(a.values());
    const auto& bv = b.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += bv[i];
    return make_node("add", a.shape(), std::move(v), {a, b},
                     [](const Tensor& g) { return std::vector<Tensor>{g, g}; });
}

Tensor sub(const Tensor& a, const Tensor& b) {
    require_same_shape("sub", a, b);
    std::vector<double> v(a.values());
    const auto& bv = b.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= bv[i];
    return make_node("sub", a.shape(), std::move(v), {a, b},
                     [](const Tensor& g) { return std::vector<Tensor>{g, neg(g)}; });
}

Tensor mul(const Tensor& a, const Tensor& b) {
    require_same_shape("mul", a, b);
    std::vector<double> v(a.values());
    const auto& bv = b.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= bv[i];
    return make_node("mul", a.shape(), std::move(v), {a, b}, [a, b](const Tensor& g) {
        return std::vector<Tensor>{mul(g, b), mul(g, a)};
    });
}

Tensor affine(const Tensor& x, double a, double b) {
    std::vector<double> v(x.values());
    for (double& e : v) e = a * e + b;
    return make_node("affine", x.shape(), std::move(v), {x}, [a](const Tensor& g) {
        return std::vector<Tensor>{affine(g, a, 0.0)};
    });
}

Tensor mul_scalar(const Tensor& x, double c) { return affine(x, c, 0.0); }
Tensor add_scalar(const Tensor& x, double c) { return affine(x, 1.0, c); }
Tensor neg(const Tensor& x) { return affine(x, -1.0, 0.0); }

Tensor abs(const Tensor& x) {
    std::vector<double> v(x.values());
    for (double& e : v) e = std::fabs(e);
    return make_node("abs", x.shape(), std::move(v), {x}, [x](const Tensor& g) {
        std::vector<double> sign(x.values().size());
        for (std::size_t i = 0; i < sign.size(); ++i) {
            double e = x.at(static_cast<std::int64_t>(i));
            sign[i] = e > 0.0 ? 1.0 : (e < 0.0 ? -1.0 : 0.0);
        }
        return std::vector<Tensor>{mul(g, Tensor::leaf(x.shape(), std::move(sign)))};
    });
}

Tensor square(const Tensor& x) {
    std::vector<double> v(x.values());
    for (double& e : v) e = e * e;
    return make_node("square", x.shape(), std::move(v), {x}, [x](const Tensor& g) {
        return std::vector<Tensor>{mul(g, affine(x, 2.0, 0.0))};
    });
}

Tensor sqrt(const Tensor& x) {
    std::vector<double> v(x.values());
    for (double& e : v) e = std::sqrt(e);
    return make_node("sqrt", x.shape(), std::move(v), {x}, [x](const Tensor& g) {
        return std::vector<Tensor>{mul(g, affine(recip(sqrt(x)), 0.5, 0.0))};
    });
}

Tensor recip(const Tensor& x) {
    std::vector<double> v(x.values());
    for (double& e : v) e = 1.0 / e;
    return make_node("recip", x.shape(), std::move(v), {x}, [x](const Tensor& g) {
        return std::vector<Tensor>{mul(g, affine(square(recip(x)), -1.0, 0.0))};
    });
}

Tensor sigmoid(const Tensor& x) {
    std::vector<double> v(x.values());
    for (double& e : v) e = stable_sigmoid(e);
    return make_node("sigmoid", x.shape(), std::move(v), {x}, [x](const Tensor& g) {
        Tensor s = sigmoid(x);
        return std::vector<Tensor>{mul(g, mul(s, affine(s, -1.0, 1.0)))};
    });
}

Tensor softplus(const Tensor& x) {
    std::vector<double> v(x.values());
    for (double& e : v) e = stable_softplus(e);
    return make_node("softplus", x.shape(), std::move(v), {x}, [x](const Tensor& g) {
        return std::vector<Tensor>{mul(g, sigmoid(x))};
    });
}

Tensor leaky_relu(const Tensor& x, double slope) {
    std::vector<double> v(x.values());
    for (double& e : v) e = e > 0.0 ? e : slope * e;
    return make_node("leaky_relu", x.shape(), std::move(v), {x}, [x, slope](const Tensor& g) {
        std::vector<double> mask(x.values().size());
        for (std::size_t i = 0; i < mask.size(); ++i) {
            mask[i] = x.at(static_cast<std::int64_t>(i)) > 0.0 ? 1.0 : slope;
        }
        return std::vector<Tensor>{mul(g, Tensor::leaf(x.shape(), std::move(mask)))};
    });
}

Tensor sum(const Tensor& x) {
    double s = 0.0;
    for (double e : x.values()) s += e;
    Shape in_shape = x.shape();
    return make_node("sum", Shape{}, {s}, {x}, [in_shape](const Tensor& g) {
        return std::vector<Tensor>{broadcast_scalar(g, in_shape)};
    });
}

Tensor mean(const Tensor& x) { return mul_scalar(sum(x), 1.0 / static_cast<double>(x.size())); }

Tensor broadcast_scalar(const Tensor& s, Shape shape) {
    require(s.size() == 1, "broadcast_scalar: source must be scalar");
    std::vector<double> v(static_cast<std::size_t>(numel(shape)), s.at(0));
    return make_node("broadcast_scalar", std::move(shape), std::move(v), {s},
                     [](const Tensor& g) { return std::vector<Tensor>{sum(g)}; });
}

Tensor sum_channels(const Tensor& x) {
    require_chw("sum_channels", x);
    const int c = x.shape()[0], h = x.shape()[1], w = x.shape()[2];
    std::vector<double> v(static_cast<std::size_t>(h) * w, 0.0);
    const auto& xv = x.values();
    for (int ci = 0; ci < c; ++ci) {
        const double* plane = xv.data() + static_cast<std::size_t>(ci) * h * w;
        for (int i = 0; i < h * w; ++i) v[static_cast<std::size_t>(i)] += plane[i];
    }
    return make_node("sum_channels", Shape{1, h, w}, std::move(v), {x}, [c](const Tensor& g) {
        return std::vector<Tensor>{bcast_channels(g, c)};
    });
}

Tensor bcast_channels(const Tensor& m, int channels) {
    require_chw("bcast_channels", m);
    require(m.shape()[0] == 1, "bcast_channels: source must have 1 channel");
    const int h = m.shape()[1], w = m.shape()[2];
    std::vector<double> v(static_cast<std::size_t>(channels) * h * w);
    for (int ci = 0; ci < channels; ++ci) {
        std::copy(m.values().begin(), m.values().end(),
                  v.begin() + static_cast<std::ptrdiff_t>(ci) * h * w);
    }
    return make_node("bcast_channels", Shape{channels, h, w}, std::move(v), {m},
                     [](const Tensor& g) { return std::vector<Tensor>{sum_channels(g)}; });
}

Tensor mul_broadcast(const Tensor& x, const Tensor& m) {
    require_chw("mul_broadcast", x);
    require_chw("mul_broadcast", m);
    require(m.shape()[0] == 1 && m.shape()[1] == x.shape()[1] && m.shape()[2] == x.shape()[2],
            "mul_broadcast: map must be [1,H,W] matching " + shape_str(x.shape()));
    const int c = x.shape()[0], hw = x.shape()[1] * x.shape()[2];
    std::vector<double> v(x.values());
    const auto& mv = m.values();
    for (int ci = 0; ci < c; ++ci) {
        double* plane = v.data() + static_cast<std::size_t>(ci) * hw;
        for (int i = 0; i < hw; ++i) plane[i] *= mv[static_cast<std::size_t>(i)];
    }
    return make_node("mul_broadcast", x.shape(), std::move(v), {x, m}, [x, m](const Tensor& g) {
        return std::vector<Tensor>{mul_broadcast(g, m), sum_channels(mul(g, x))};
    });
}

Tensor broadcast_bias(const Tensor& b, int h, int w) {
    require(b.shape().size() == 1, "broadcast_bias: bias must be [C]");
    const int c = b.shape()[0];
    std::vector<double> v(static_cast<std::size_t>(c) * h * w);
    for (int ci = 0; ci < c; ++ci) {
        std::fill_n(v.begin() + static_cast<std::ptrdiff_t>(ci) * h * w, h * w, b.at(ci));
    }
    return make_node("broadcast_bias", Shape{c, h, w}, std::move(v), {b},
                     [](const Tensor& g) { return std::vector<Tensor>{sum_spatial(g)}; });
}

Tensor sum_spatial(const Tensor& x) {
    require_chw("sum_spatial", x);
    const int c = x.shape()[0], hw = x.shape()[1] * x.shape()[2];
    const int h = x.shape()[1], w = x.shape()[2];
    std::vector<double> v(static_cast<std::size_t>(c), 0.0);
    for (int ci = 0; ci < c; ++ci) {
        const double* plane = x.values().data() + static_cast<std::size_t>(ci) * hw;
        for (int i = 0; i < hw; ++i) v[static_cast<std::size_t>(ci)] += plane[i];
    }
    return make_node("sum_spatial", Shape{c}, std::move(v), {x}, [h, w](const Tensor& g) {
        return std::vector<Tensor>{broadcast_bias(g, h, w)};
    });
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
    require_chw("concat_channels", a);
    require_chw("concat_channels", b);
    require(a.shape()[1] == b.shape()[1] && a.shape()[2] == b.shape()[2],
            "concat_channels: spatial dims differ");
    const int ca = a.shape()[0], cb = b.shape()[0];
    std::vector<double> v;
    v.reserve(a.values().size() + b.values().size());
    v.insert(v.end(), a.values().begin(), a.values().end());
    v.insert(v.end(), b.values().begin(), b.values().end());
    return make_node("concat_channels", Shape{ca + cb, a.shape()[1], a.shape()[2]}, std::move(v),
                     {a, b}, [ca, cb](const Tensor& g) {
                         return std::vector<Tensor>{slice_channels(g, 0, ca),
                                                    slice_channels(g, ca, ca + cb)};
                     });
}

Tensor slice_channels(const Tensor& x, int c0, int c1) {
    require_chw("slice_channels", x);
    const int c = x.shape()[0], h = x.shape()[1], w = x.shape()[2];
    require(0 <= c0 && c0 < c1 && c1 <= c, "slice_channels: bad channel range");
    const std::size_t hw = static_cast<std::size_t>(h) * w;
    std::vector<double> v(x.values().begin() + static_cast<std::ptrdiff_t>(c0 * hw),
                          x.values().begin() + static_cast<std::ptrdiff_t>(c1 * hw));
    return make_node("slice_channels", Shape{c1 - c0, h, w}, std::move(v), {x},
                     [c0, c1, c, h, w](const Tensor& g) {
                         Tensor embedded = g;
                         if (c0 > 0) embedded = concat_channels(Tensor::zeros({c0, h, w}), embedded);
                         if (c1 < c) embedded = concat_channels(embedded, Tensor::zeros({c - c1, h, w}));
                         return std::vector<Tensor>{embedded};
                     });
}

Tensor crop2d(const Tensor& x, int y0, int x0, int h, int w) {
    require_chw("crop2d", x);
    const int c = x.shape()[0], ih = x.shape()[1], iw = x.shape()[2];
    require(y0 >= 0 && x0 >= 0 && h > 0 && w > 0 && y0 + h <= ih && x0 + w <= iw,
            "crop2d: rect out of bounds");
    std::vector<double> v(static_cast<std::size_t>(c) * h * w);
    for (int ci = 0; ci < c; ++ci) {
        for (int i = 0; i < h; ++i) {
            const double* src = x.values().data() +
                                (static_cast<std::size_t>(ci) * ih + (y0 + i)) * iw + x0;
            std::copy_n(src, w, v.begin() + (static_cast<std::ptrdiff_t>(ci) * h + i) * w);
        }
    }
    return make_node("crop2d", Shape{c, h, w}, std::move(v), {x},
                     [y0, x0, h, w, ih, iw](const Tensor& g) {
                         return std::vector<Tensor>{pad2d(g, y0, ih - y0 - h, x0, iw - x0 - w)};
                     });
}

Tensor pad2d(const Tensor& x, int top, int bottom, int left, int right) {
    require_chw("pad2d", x);
    require(top >= 0 && bottom >= 0 && left >= 0 && right >= 0, "pad2d: negative padding");
    const int c = x.shape()[0], ih = x.shape()[1], iw = x.shape()[2];
    const int oh = ih + top + bottom, ow = iw + left + right;
    std::vector<double> v(static_cast<std::size_t>(c) * oh * ow, 0.0);
    for (int ci = 0; ci < c; ++ci) {
        for (int i = 0; i < ih; ++i) {
            const double* src = x.values().data() + (static_cast<std::size_t>(ci) * ih + i) * iw;
            std::copy_n(src, iw,
                        v.begin() + (static_cast<std::ptrdiff_t>(ci) * oh + top + i) * ow + left);
        }
    }
    return make_node("pad2d", Shape{c, oh, ow}, std::move(v), {x},
                     [top, left, ih, iw](const Tensor& g) {
                         return std::vector<Tensor>{crop2d(g, top, left, ih, iw)};
                     });
}

Tensor nearest_upsample(const Tensor& x, int factor) {
    require_chw("nearest_upsample", x);
    require(factor >= 1, "nearest_upsample: factor must be >= 1");
    const int c = x.shape()[0], ih = x.shape()[1], iw = x.shape()[2];
    const int oh = ih * factor, ow = iw * factor;
    std::vector<double> v(static_cast<std::size_t>(c) * oh * ow);
    for (int ci = 0; ci < c; ++ci) {
        for (int i = 0; i < oh; ++i) {
            const double* src = x.values().data() +
                                (static_cast<std::size_t>(ci) * ih + i / factor) * iw;
            double* dst = v.data() + (static_cast<std::size_t>(ci) * oh + i) * ow;
            for (int j = 0; j < ow; ++j) dst[j] = src[j / factor];
        }
    }
    return make_node("nearest_upsample", Shape{c, oh, ow}, std::move(v), {x},
                     [factor](const Tensor& g) {
                         return std::vector<Tensor>{sum_pool(g, factor)};
                     });
}

Tensor sum_pool(const Tensor& x, int factor) {
    require_chw("sum_pool", x);
    const int c = x.shape()[0], ih = x.shape()[1], iw = x.shape()[2];
    require(factor >= 1 && ih % factor == 0 && iw % factor == 0,
            "sum_pool: dims not divisible by factor");
    const int oh = ih / factor, ow = iw / factor;
    std::vector<double> v(static_cast<std::size_t>(c) * oh * ow, 0.0);
    for (int ci = 0; ci < c; ++ci) {
        for (int i = 0; i < ih; ++i) {
            const double* src = x.values().data() + (static_cast<std::size_t>(ci) * ih + i) * iw;
            double* dst = v.data() + (static_cast<std::size_t>(ci) * oh + i / factor) * ow;
            for (int j = 0; j < iw; ++j) dst[j / factor] += src[j];
        }
    }
    return make_node("sum_pool", Shape{c, oh, ow}, std::move(v), {x}, [factor](const Tensor& g) {
        return std::vector<Tensor>{nearest_upsample(g, factor)};
    });
}

Tensor avg_pool(const Tensor& x, int factor) {
    return mul_scalar(sum_pool(x, factor), 1.0 / (static_cast<double>(factor) * factor));
}

namespace {

struct ConvDims {
    int ci, h, w;       // input
    int co, kh, kw;     // kernel
    int ho, wo;         // output
    int stride, pad;
};

ConvDims conv_dims(const char* op, const Shape& xs, const Shape& ws, int stride, int pad) {
    require(xs.size() == 3, std::string(op) + ": input must be [Ci,H,W]");
    require(ws.size() == 4, std::string(op) + ": weight must be [Co,Ci,kh,kw]");
    require(stride >= 1 && pad >= 0, std::string(op) + ": bad stride/pad");
    ConvDims d{};
    d.ci = xs[0];
    d.h = xs[1];
    d.w = xs[2];
    d.co = ws[0];
    d.kh = ws[2];
    d.kw = ws[3];
    d.stride = stride;
    d.pad = pad;
    require(ws[1] == d.ci, std::string(op) + ": channel mismatch, input " + shape_str(xs) +
                               " weight " + shape_str(ws));
    require(d.kh <= d.h + 2 * pad && d.kw <= d.w + 2 * pad,
            std::string(op) + ": kernel larger than padded input");
    d.ho = (d.h + 2 * pad - d.kh) / stride + 1;
    d.wo = (d.w + 2 * pad - d.kw) / stride + 1;
    return d;
}

// Shared triple-loop over the valid (oc,ic,kh,kw,oh,ow) index set of the
// cross-correlation; `body` sees flat offsets into x, w, y storage.
template <typename F>
void for_conv_indices(const ConvDims& d, F&& body) {
    for (int oc = 0; oc < d.co; ++oc) {
        for (int ic = 0; ic < d.ci; ++ic) {
            for (int kh = 0; kh < d.kh; ++kh) {
                OffRange rh = valid_range(kh, d.pad, d.stride, d.h, d.ho);
                if (rh.empty()) continue;
                for (int kw = 0; kw < d.kw; ++kw) {
                    OffRange rw = valid_range(kw, d.pad, d.stride, d.w, d.wo);
                    if (rw.empty()) continue;
                    const std::size_t woff =
                        ((static_cast<std::size_t>(oc) * d.ci + ic) * d.kh + kh) * d.kw + kw;
                    for (int oh = rh.lo; oh <= rh.hi; ++oh) {
                        const int ih = oh * d.stride + kh - d.pad;
                        const std::size_t xrow = (static_cast<std::size_t>(ic) * d.h + ih) * d.w;
                        const std::size_t yrow = (static_cast<std::size_t>(oc) * d.ho + oh) * d.wo;
                        body(woff, xrow, yrow, rw, kw);
                    }
                }
            }
        }
    }
}

}  // namespace

Tensor conv2d(const Tensor& x, const Tensor& w, int stride, int pad) {
    ConvDims d = conv_dims("conv2d", x.shape(), w.shape(), stride, pad);
    std::vector<double> y(static_cast<std::size_t>(d.co) * d.ho * d.wo, 0.0);
    const double* xv = x.values().data();
    const double* wv = w.values().data();
    for_conv_indices(d, [&](std::size_t woff, std::size_t xrow, std::size_t yrow, OffRange rw,
                            int kw) {
        const double wk = wv[woff];
        const double* xr = xv + xrow + kw - d.pad;
        double* yr = y.data() + yrow;
        if (d.stride == 1) {
            for (int ow = rw.lo; ow <= rw.hi; ++ow) yr[ow] += wk * xr[ow];
        } else {
            for (int ow = rw.lo; ow <= rw.hi; ++ow) yr[ow] += wk * xr[ow * d.stride];
        }
    });
    const int h = d.h, ww = d.w, kh = d.kh, kw2 = d.kw;
    return make_node("conv2d", Shape{d.co, d.ho, d.wo}, std::move(y), {x, w},
                     [x, w, stride, pad, h, ww, kh, kw2](const Tensor& g) {
                         return std::vector<Tensor>{
                             conv2d_input_grad(g, w, stride, pad, h, ww),
                             conv2d_weight_grad(x, g, stride, pad, kh, kw2)};
                     });
}

Tensor conv2d_input_grad(const Tensor& g, const Tensor& w, int stride, int pad, int in_h,
                         int in_w) {
    require(g.shape().size() == 3, "conv2d_input_grad: grad must be [Co,Ho,Wo]");
    ConvDims d = conv_dims("conv2d_input_grad", Shape{w.shape()[1], in_h, in_w}, w.shape(), stride,
                           pad);
    require(g.shape()[0] == d.co && g.shape()[1] == d.ho && g.shape()[2] == d.wo,
            "conv2d_input_grad: grad shape " + shape_str(g.shape()) + " does not match conv output");
    std::vector<double> gx(static_cast<std::size_t>(d.ci) * d.h * d.w, 0.0);
    const double* gv = g.values().data();
    const double* wv = w.values().data();
    for_conv_indices(d, [&](std::size_t woff, std::size_t xrow, std::size_t yrow, OffRange rw,
                            int kw) {
        const double wk = wv[woff];
        double* xr = gx.data() + xrow + kw - d.pad;
        const double* yr = gv + yrow;
        if (d.stride == 1) {
            for (int ow = rw.lo; ow <= rw.hi; ++ow) xr[ow] += wk * yr[ow];
        } else {
            for (int ow = rw.lo; ow <= rw.hi; ++ow) xr[ow * d.stride] += wk * yr[ow];
        }
    });
    return make_node("conv2d_input_grad", Shape{d.ci, d.h, d.w}, std::move(gx), {g, w},
                     [g, w, stride, pad](const Tensor& u) {
                         const int kh = w.shape()[2], kw = w.shape()[3];
                         return std::vector<Tensor>{
                             conv2d(u, w, stride, pad),
                             conv2d_weight_grad(u, g, stride, pad, kh, kw)};
                     });
}

Tensor conv2d_weight_grad(const Tensor& x, const Tensor& g, int stride, int pad, int kh, int kw) {
    require(x.shape().size() == 3 && g.shape().size() == 3,
            "conv2d_weight_grad: operands must be [C,H,W]");
    ConvDims d = conv_dims("conv2d_weight_grad", x.shape(),
                           Shape{g.shape()[0], x.shape()[0], kh, kw}, stride, pad);
    require(g.shape()[1] == d.ho && g.shape()[2] == d.wo,
            "conv2d_weight_grad: grad shape " + shape_str(g.shape()) + " does not match conv output");
    std::vector<double> gw(static_cast<std::size_t>(d.co) * d.ci * kh * kw, 0.0);
    const double* xv = x.values().data();
    const double* gv = g.values().data();
    for_conv_indices(d, [&](std::size_t woff, std::size_t xrow, std::size_t yrow, OffRange rw,
                            int kw_i) {
        const double* xr = xv + xrow + kw_i - d.pad;
        const double* yr = gv + yrow;
        double acc = 0.0;
        if (d.stride == 1) {
            for (int ow = rw.lo; ow <= rw.hi; ++ow) acc += xr[ow] * yr[ow];
        } else {
            for (int ow = rw.lo; ow <= rw.hi; ++ow) acc += xr[ow * d.stride] * yr[ow];
        }
        gw[woff] += acc;
    });
    const int in_h = d.h, in_w = d.w;
    return make_node("conv2d_weight_grad", Shape{d.co, d.ci, kh, kw}, std::move(gw), {x, g},
                     [x, g, stride, pad, in_h, in_w](const Tensor& u) {
                         return std::vector<Tensor>{
                             conv2d_input_grad(g, u, stride, pad, in_h, in_w),
                             conv2d(x, u, stride, pad)};
                     });
}

Tensor conv_bias(const Tensor& x, const Tensor& w, const Tensor& b, int stride, int pad) {
    Tensor y = conv2d(x, w, stride, pad);
    return add(y, broadcast_bias(b, y.shape()[1], y.shape()[2]));
}

}  // namespace f2n::ad
