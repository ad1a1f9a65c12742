// Regenerates the committed fixture images. Goldens are frozen outputs of
// the pipeline: regenerating them only changes bytes if behavior changed.

#include <cstdio>
#include <string>

#include "f2n/degrade/pipeline.hpp"
#include "f2n/harness/png_io.hpp"
#include "f2n/harness/scenes.hpp"

using namespace f2n;

int main(int argc, char** argv) {
    std::string dir = argc > 1 ? argv[1] : "fixtures";

    harness::GenConfig gc;
    gc.scene_h = 64;
    gc.scene_w = 64;
    gc.face_sides = {32};
    auto scenes = harness::gen_scenes(1, 7, gc);
    Image test_img = harness::quantize8(scenes[0].image);
    harness::write_png(dir + "/test_image_64.png", test_img);

    auto profile = degrade::DistributionProfile::preset("iid");
    auto spec = degrade::sample_spec(profile, 42);
    Image lr = degrade::apply(spec, test_img);
    harness::write_png(dir + "/golden_lr_seed42.png", lr);

    std::printf("fixtures written to %s\n", dir.c_str());
    return 0;
}
