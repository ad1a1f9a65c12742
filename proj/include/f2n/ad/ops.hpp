#pragma once

#include "f2n/ad/tensor.hpp"

namespace f2n::ad {

// Elementwise, same-shape operands.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);

// y = a*x + b, scalar coefficients.
Tensor affine(const Tensor& x, double a, double b);
Tensor mul_scalar(const Tensor& x, double c);
Tensor add_scalar(const Tensor& x, double c);
Tensor neg(const Tensor& x);

Tensor abs(const Tensor& x);
Tensor square(const Tensor& x);
Tensor sqrt(const Tensor& x);
Tensor recip(const Tensor& x);
Tensor sigmoid(const Tensor& x);
Tensor softplus(const Tensor& x);
Tensor leaky_relu(const Tensor& x, double slope);

// Reductions and their broadcast adjoints.
Tensor sum(const Tensor& x);
Tensor mean(const Tensor& x);
Tensor broadcast_scalar(const Tensor& s, Shape shape);

// [C,H,W] channel reductions/broadcasts.
Tensor sum_channels(const Tensor& x);                  // -> [1,H,W]
Tensor bcast_channels(const Tensor& m, int channels);  // [1,H,W] -> [C,H,W]
Tensor mul_broadcast(const Tensor& x, const Tensor& m);  // x[C,H,W] * m[1,H,W]

// Per-channel bias: [C] <-> [C,H,W].
Tensor broadcast_bias(const Tensor& b, int h, int w);
Tensor sum_spatial(const Tensor& x);  // [C,H,W] -> [C]

Tensor concat_channels(const Tensor& a, const Tensor& b);
Tensor slice_channels(const Tensor& x, int c0, int c1);

Tensor crop2d(const Tensor& x, int y0, int x0, int h, int w);
Tensor pad2d(const Tensor& x, int top, int bottom, int left, int right);

Tensor nearest_upsample(const Tensor& x, int factor);
Tensor sum_pool(const Tensor& x, int factor);
Tensor avg_pool(const Tensor& x, int factor);

// 2-d cross-correlation, zero padding. x:[Ci,H,W], w:[Co,Ci,kh,kw] -> [Co,Ho,Wo].
// The two gradient kernels are public ops so that backward passes stay
// differentiable (second and higher order gradients compose from these three).
Tensor conv2d(const Tensor& x, const Tensor& w, int stride, int pad);
Tensor conv2d_input_grad(const Tensor& g, const Tensor& w, int stride, int pad, int in_h, int in_w);
Tensor conv2d_weight_grad(const Tensor& x, const Tensor& g, int stride, int pad, int kh, int kw);

// conv2d + per-output-channel bias.
Tensor conv_bias(const Tensor& x, const Tensor& w, const Tensor& b, int stride, int pad);

}  // namespace f2n::ad
