#pragma once

#include <string>

#include "f2n/image.hpp"

namespace f2n::harness {

/// 8-bit RGB (or grayscale) PNG. Values are quantized only at this boundary;
/// a write/read round trip returns exactly the quantized image.
void write_png(const std::string& path, const Image& img);
Image read_png(const std::string& path);

/// The quantization applied on write: round(v*255)/255, clamped.
Image quantize8(const Image& img);

}  // namespace f2n::harness
