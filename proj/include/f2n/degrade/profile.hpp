#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "f2n/image.hpp"

namespace f2n::degrade {

enum class BlurKind { gaussian_iso, gaussian_aniso, motion_linear };
enum class NoiseKind { gaussian, poisson, speckle };
enum class StageOp { blur, resample, noise, compress };

struct BlurSpec {
    BlurKind kind = BlurKind::gaussian_iso;
    int ksize = 1;  // odd; 1 means identity
    double sigma_x = 0.0;
    double sigma_y = 0.0;
    double angle = 0.0;  // radians
};

struct ResampleSpec {
    double factor = 1.0;
    ResampleFilter filter = ResampleFilter::bicubic;
};

struct NoiseSpec {
    NoiseKind kind = NoiseKind::gaussian;
    double strength = 0.0;
};

struct CompressSpec {
    double quality = 100.0;  // [10,100]
};

struct StageSpec {
    BlurSpec blur;
    ResampleSpec resample;
    NoiseSpec noise;
    CompressSpec compress;
    std::array<StageOp, 4> order{StageOp::blur, StageOp::resample, StageOp::noise,
                                 StageOp::compress};
};

/// Sampled parameters of one task's degradation; applying the same spec to a
/// face crop and to the natural image is the pipeline's core premise.
struct DegradationSpec {
    std::array<StageSpec, 2> stages;
    int scale = 4;
    std::uint64_t seed = 0;
};

struct Range {
    double lo = 0.0, hi = 0.0;
};

/// Parameter ranges and sampling weights for every DegradationSpec field.
/// The numeric defaults are editable configuration, not quoted values.
struct DistributionProfile {
    std::vector<BlurKind> blur_kinds{BlurKind::gaussian_iso, BlurKind::gaussian_aniso};
    std::vector<double> blur_kind_weights{0.7, 0.3};
    std::vector<int> kernel_sizes{7, 9, 11, 13};
    Range blur_sigma{0.2, 2.4};
    Range stage2_blur_sigma{0.2, 1.2};

    std::vector<ResampleFilter> filters{ResampleFilter::bilinear, ResampleFilter::bicubic,
                                        ResampleFilter::area};
    std::vector<double> filter_weights{1.0, 1.0, 1.0};
    Range stage1_factor{0.4, 1.1};

    std::vector<NoiseKind> noise_kinds{NoiseKind::gaussian, NoiseKind::poisson};
    std::vector<double> noise_kind_weights{0.6, 0.4};
    Range noise_strength{0.0, 0.08};
    Range stage2_noise_strength{0.0, 0.04};

    Range quality{10.0, 100.0};
    bool shuffle_stage2_tail = true;  // randomly swap noise/compress order in stage 2
    int scale = 4;

    static DistributionProfile preset(const std::string& name);  // "iid" or "ood"
    void validate() const;
};

/// Draws one DegradationSpec; deterministic in (profile, seed).
DegradationSpec sample_spec(const DistributionProfile& profile, std::uint64_t seed);

/// Blur kernel for one BlurSpec; nonnegative, sums to 1.
std::vector<double> make_blur_kernel(const BlurSpec& spec);

const char* to_string(BlurKind k);
const char* to_string(NoiseKind k);
const char* to_string(ResampleFilter f);

}  // namespace f2n::degrade
