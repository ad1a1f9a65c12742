#pragma once

#include "f2n/degrade/profile.hpp"
#include "f2n/image.hpp"
#include "f2n/rng.hpp"

namespace f2n::degrade {

/// Runs the two-stage degradation on an HR image. HR dims must be divisible
/// by spec.scale; the LR output is exactly HR/scale. Deterministic in
/// (spec, image); the noise stream is derived from spec.seed alone.
Image apply(const DegradationSpec& spec, const Image& hr);

/// Additive/multiplicative noise per NoiseSpec; clips to [0,1].
Image add_noise(const Image& img, const NoiseSpec& noise, Rng& rng);

}  // namespace f2n::degrade
