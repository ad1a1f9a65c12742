#pragma once

#include "f2n/image.hpp"

namespace f2n::degrade {

/// Block-transform compression proxy: 8x8 DCT on the luma channel of a
/// reversible RGB<->YCbCr transform, standard luminance quantization table
/// scaled by quality, chroma passed through. The DC coefficient is not
/// quantized, so flat regions survive exactly. Output clipped to [0,1].
Image compress(const Image& img, double quality);

}  // namespace f2n::degrade
