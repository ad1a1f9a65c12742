#include "f2n/degrade/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "f2n/degrade/jpeg.hpp"

namespace f2n::degrade {

Image add_noise(const Image& img, const NoiseSpec& noise, Rng& rng) {
    if (noise.strength <= 0.0) return img;
    Image out = img;
    switch (noise.kind) {
        case NoiseKind::gaussian:
            for (double& v : out.px) v += noise.strength * rng.normal();
            break;
        case NoiseKind::poisson:
            // Signal-dependent Gaussian approximation: variance proportional
            // to intensity.
            for (double& v : out.px) v += noise.strength * std::sqrt(std::max(v, 0.0)) * rng.normal();
            break;
        case NoiseKind::speckle:
            for (double& v : out.px) v += v * noise.strength * rng.normal();
            break;
    }
    return clip01(std::move(out));
}

Image apply(const DegradationSpec& spec, const Image& hr) {
    if (spec.scale < 1) throw std::invalid_argument("degrade::apply: bad scale");
    if (hr.h % spec.scale != 0 || hr.w % spec.scale != 0) {
        throw std::invalid_argument("degrade::apply: HR dims not divisible by scale");
    }
    const int lr_h = hr.h / spec.scale, lr_w = hr.w / spec.scale;

    Image img = hr;
    for (int si = 0; si < 2; ++si) {
        const StageSpec& st = spec.stages[static_cast<std::size_t>(si)];
        Rng noise_rng = Rng(spec.seed).fork(si == 0 ? "noise/0" : "noise/1");
        for (StageOp op : st.order) {
            switch (op) {
                case StageOp::blur: {
                    if (st.blur.ksize > 1) {
                        auto kernel = make_blur_kernel(st.blur);
                        img = convolve_reflect(img, kernel, st.blur.ksize);
                    }
                    break;
                }
                case StageOp::resample: {
                    int nh, nw;
                    if (si == 0) {
                        // Never drop below the final LR size mid-pipeline.
                        nh = std::max(lr_h, static_cast<int>(std::lround(img.h * st.resample.factor)));
                        nw = std::max(lr_w, static_cast<int>(std::lround(img.w * st.resample.factor)));
                    } else {
                        nh = lr_h;
                        nw = lr_w;
                    }
                    if (nh != img.h || nw != img.w) {
                        img = resize(img, nh, nw, st.resample.filter);
                    }
                    break;
                }
                case StageOp::noise:
                    img = add_noise(img, st.noise, noise_rng);
                    break;
                case StageOp::compress:
                    img = compress(img, st.compress.quality);
                    break;
            }
        }
    }
    if (img.h != lr_h || img.w != lr_w) {
        img = resize(img, lr_h, lr_w, spec.stages[1].resample.filter);
    }
    return clip01(std::move(img));
}

}  // namespace f2n::degrade
