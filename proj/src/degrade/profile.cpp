#include "f2n/degrade/profile.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "f2n/rng.hpp"

namespace f2n::degrade {

DistributionProfile DistributionProfile::preset(const std::string& name) {
    DistributionProfile p;
    if (name == "iid") {
        return p;
    }
    if (name == "ood") {
        // Out-of-distribution substitutions: motion blur instead of Gaussian,
        // speckle noise instead of Gaussian/Poisson.
        p.blur_kinds = {BlurKind::motion_linear};
        p.blur_kind_weights = {1.0};
        p.noise_kinds = {NoiseKind::speckle};
        p.noise_kind_weights = {1.0};
        p.noise_strength = {0.0, 0.12};
        p.stage2_noise_strength = {0.0, 0.06};
        return p;
    }
    throw std::invalid_argument("DistributionProfile: unknown preset '" + name + "'");
}

void DistributionProfile::validate() const {
    auto check_range = [](const Range& r, const char* what) {
        if (!(r.lo <= r.hi)) {
            throw std::invalid_argument(std::string("DistributionProfile: bad range for ") + what);
        }
    };
    if (blur_kinds.empty() || blur_kinds.size() != blur_kind_weights.size()) {
        throw std::invalid_argument("DistributionProfile: blur kinds/weights mismatch");
    }
    if (noise_kinds.empty() || noise_kinds.size() != noise_kind_weights.size()) {
        throw std::invalid_argument("DistributionProfile: noise kinds/weights mismatch");
    }
    if (filters.empty() || filters.size() != filter_weights.size()) {
        throw std::invalid_argument("DistributionProfile: filters/weights mismatch");
    }
    if (kernel_sizes.empty()) throw std::invalid_argument("DistributionProfile: no kernel sizes");
    for (int k : kernel_sizes) {
        if (k < 1 || k % 2 == 0) {
            throw std::invalid_argument("DistributionProfile: kernel sizes must be odd and >= 1");
        }
    }
    check_range(blur_sigma, "blur_sigma");
    check_range(stage2_blur_sigma, "stage2_blur_sigma");
    check_range(stage1_factor, "stage1_factor");
    check_range(noise_strength, "noise_strength");
    check_range(stage2_noise_strength, "stage2_noise_strength");
    check_range(quality, "quality");
    if (quality.lo < 10.0 || quality.hi > 100.0) {
        throw std::invalid_argument("DistributionProfile: quality must lie in [10,100]");
    }
    if (scale < 1) throw std::invalid_argument("DistributionProfile: scale must be >= 1");
}

DegradationSpec sample_spec(const DistributionProfile& profile, std::uint64_t seed) {
    profile.validate();
    Rng rng(seed);
    DegradationSpec spec;
    spec.scale = profile.scale;
    spec.seed = seed;

    for (int si = 0; si < 2; ++si) {
        StageSpec& st = spec.stages[static_cast<std::size_t>(si)];
        const Range& sig = si == 0 ? profile.blur_sigma : profile.stage2_blur_sigma;
        st.blur.kind = profile.blur_kinds[rng.choice(profile.blur_kind_weights)];
        st.blur.ksize = profile.kernel_sizes[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(profile.kernel_sizes.size()) - 1))];
        st.blur.sigma_x = rng.uniform(sig.lo, sig.hi);
        st.blur.sigma_y = st.blur.kind == BlurKind::gaussian_aniso ? rng.uniform(sig.lo, sig.hi)
                                                                   : st.blur.sigma_x;
        st.blur.angle = rng.uniform(0.0, std::numbers::pi);

        st.resample.filter = profile.filters[rng.choice(profile.filter_weights)];
        // Stage 1 scales freely; stage 2 lands exactly on HR/s, its factor is
        // resolved against the intermediate dims when the spec is applied.
        st.resample.factor =
            si == 0 ? rng.uniform(profile.stage1_factor.lo, profile.stage1_factor.hi) : 0.0;

        const Range& ns = si == 0 ? profile.noise_strength : profile.stage2_noise_strength;
        st.noise.kind = profile.noise_kinds[rng.choice(profile.noise_kind_weights)];
        st.noise.strength = rng.uniform(ns.lo, ns.hi);

        st.compress.quality = rng.uniform(profile.quality.lo, profile.quality.hi);

        if (si == 1 && profile.shuffle_stage2_tail && rng.uniform() < 0.5) {
            std::swap(st.order[2], st.order[3]);
        }
    }
    return spec;
}

std::vector<double> make_blur_kernel(const BlurSpec& spec) {
    const int k = spec.ksize;
    if (k < 1 || k % 2 == 0) throw std::invalid_argument("make_blur_kernel: ksize must be odd");
    std::vector<double> kernel(static_cast<std::size_t>(k) * k, 0.0);
    const double half = (k - 1) / 2.0;

    if (k == 1) {
        kernel[0] = 1.0;
        return kernel;
    }

    if (spec.kind == BlurKind::motion_linear) {
        // Line through the center at the given angle, bilinearly splatted.
        const double c = std::cos(spec.angle), s = std::sin(spec.angle);
        const int samples = k * 16;
        for (int i = 0; i < samples; ++i) {
            double t = -half + (k - 1.0) * i / (samples - 1.0);
            double x = half + t * c, y = half + t * s;
            int x0 = static_cast<int>(std::floor(x)), y0 = static_cast<int>(std::floor(y));
            double fx = x - x0, fy = y - y0;
            for (int dy = 0; dy <= 1; ++dy) {
                for (int dx = 0; dx <= 1; ++dx) {
                    int xi = x0 + dx, yi = y0 + dy;
                    if (xi < 0 || xi >= k || yi < 0 || yi >= k) continue;
                    double wgt = (dx ? fx : 1.0 - fx) * (dy ? fy : 1.0 - fy);
                    kernel[static_cast<std::size_t>(yi) * k + xi] += wgt;
                }
            }
        }
    } else {
        const double sx = std::max(spec.sigma_x, 1e-3);
        const double sy = std::max(spec.sigma_y, 1e-3);
        const double c = std::cos(spec.angle), s = std::sin(spec.angle);
        for (int y = 0; y < k; ++y) {
            for (int x = 0; x < k; ++x) {
                double dx = x - half, dy = y - half;
                double u = c * dx + s * dy;    // rotated frame
                double v = -s * dx + c * dy;
                kernel[static_cast<std::size_t>(y) * k + x] =
                    std::exp(-0.5 * (u * u / (sx * sx) + v * v / (sy * sy)));
            }
        }
    }

    double total = 0.0;
    for (double v : kernel) total += v;
    for (double& v : kernel) v /= total;
    return kernel;
}

const char* to_string(BlurKind k) {
    switch (k) {
        case BlurKind::gaussian_iso: return "gaussian-iso";
        case BlurKind::gaussian_aniso: return "gaussian-aniso";
        case BlurKind::motion_linear: return "motion-linear";
    }
    return "?";
}

const char* to_string(NoiseKind k) {
    switch (k) {
        case NoiseKind::gaussian: return "gaussian";
        case NoiseKind::poisson: return "poisson";
        case NoiseKind::speckle: return "speckle";
    }
    return "?";
}

const char* to_string(ResampleFilter f) {
    switch (f) {
        case ResampleFilter::nearest: return "nearest";
        case ResampleFilter::bilinear: return "bilinear";
        case ResampleFilter::bicubic: return "bicubic";
        case ResampleFilter::area: return "area";
    }
    return "?";
}

}  // namespace f2n::degrade
