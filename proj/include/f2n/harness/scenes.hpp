#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "f2n/image.hpp"
#include "f2n/rng.hpp"

namespace f2n::harness {

struct FaceRect {
    int x = 0, y = 0, w = 0, h = 0;
};

enum class Provenance { synthetic, folder };

/// One HR natural image plus its face regions. For synthetic scenes the
/// face images are exact crops of the scene at the rects.
struct SceneSample {
    Image image;
    std::vector<FaceRect> faces;
    std::vector<Image> face_images;
    Provenance provenance = Provenance::synthetic;
};

struct GenConfig {
    int scene_h = 128;
    int scene_w = 128;
    // Side lengths are multiples of the SR scale so LR rects stay integral.
    std::vector<int> face_sides{36, 40, 44};
    int min_faces = 1;
    int max_faces = 1;
    int align = 4;  // rect position alignment
};

/// Procedural scenes: textured backgrounds with ellipse-and-landmark face
/// patterns occupying roughly 10% of the area under the default config.
/// Deterministic in (count, seed, config).
std::vector<SceneSample> gen_scenes(int count, std::uint64_t seed, const GenConfig& cfg = {});

/// Draws one standalone face pattern (used by scene composition and tests).
Image render_face(int side, Rng& rng);

double face_area_fraction(const SceneSample& scene);

}  // namespace f2n::harness
