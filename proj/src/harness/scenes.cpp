#include "f2n/harness/scenes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace f2n::harness {

namespace {

// Bilinearly upsampled random lattice, one octave of value noise.
void add_value_noise(Image& img, Rng& rng, int cells, double amplitude) {
    const int gh = cells + 1, gw = cells + 1;
    std::vector<double> grid(static_cast<std::size_t>(gh) * gw * img.c);
    for (double& v : grid) v = rng.uniform(-1.0, 1.0);
    for (int ci = 0; ci < img.c; ++ci) {
        const double* g = grid.data() + static_cast<std::size_t>(ci) * gh * gw;
        for (int y = 0; y < img.h; ++y) {
            double fy = static_cast<double>(y) / img.h * cells;
            int y0 = static_cast<int>(fy);
            double ty = fy - y0;
            for (int x = 0; x < img.w; ++x) {
                double fx = static_cast<double>(x) / img.w * cells;
                int x0 = static_cast<int>(fx);
                double tx = fx - x0;
                double v00 = g[y0 * gw + x0], v01 = g[y0 * gw + x0 + 1];
                double v10 = g[(y0 + 1) * gw + x0], v11 = g[(y0 + 1) * gw + x0 + 1];
                double v = (1 - ty) * ((1 - tx) * v00 + tx * v01) +
                           ty * ((1 - tx) * v10 + tx * v11);
                img.at(ci, y, x) += amplitude * v;
            }
        }
    }
}

void fill_background(Image& img, Rng& rng) {
    // Base tint plus a linear gradient.
    double base[3] = {rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7)};
    double gx = rng.uniform(-0.25, 0.25), gy = rng.uniform(-0.25, 0.25);
    for (int ci = 0; ci < img.c; ++ci) {
        for (int y = 0; y < img.h; ++y) {
            for (int x = 0; x < img.w; ++x) {
                img.at(ci, y, x) = base[ci] + gx * (static_cast<double>(x) / img.w - 0.5) +
                                   gy * (static_cast<double>(y) / img.h - 0.5);
            }
        }
    }
    add_value_noise(img, rng, 4, 0.18);
    add_value_noise(img, rng, 10, 0.10);
    add_value_noise(img, rng, 32, 0.05);

    // A few hard-edged bars for structure.
    int bars = static_cast<int>(rng.uniform_int(1, 3));
    for (int b = 0; b < bars; ++b) {
        bool horizontal = rng.uniform() < 0.5;
        int pos = static_cast<int>(rng.uniform_int(0, (horizontal ? img.h : img.w) - 1));
        int thick = static_cast<int>(rng.uniform_int(2, 5));
        double shade = rng.uniform(-0.25, 0.25);
        for (int t = 0; t < thick; ++t) {
            int p = std::min(pos + t, (horizontal ? img.h : img.w) - 1);
            for (int q = 0; q < (horizontal ? img.w : img.h); ++q) {
                for (int ci = 0; ci < img.c; ++ci) {
                    if (horizontal) {
                        img.at(ci, p, q) += shade;
                    } else {
                        img.at(ci, q, p) += shade;
                    }
                }
            }
        }
    }
    img = clip01(std::move(img));
}

void fill_ellipse(Image& img, double cx, double cy, double rx, double ry, double angle,
                  const double color[3], double blend) {
    const double c = std::cos(angle), s = std::sin(angle);
    for (int y = 0; y < img.h; ++y) {
        for (int x = 0; x < img.w; ++x) {
            double dx = x - cx, dy = y - cy;
            double u = (c * dx + s * dy) / rx;
            double v = (-s * dx + c * dy) / ry;
            if (u * u + v * v <= 1.0) {
                for (int ci = 0; ci < img.c; ++ci) {
                    img.at(ci, y, x) = (1.0 - blend) * img.at(ci, y, x) + blend * color[ci];
                }
            }
        }
    }
}

void draw_stroke(Image& img, double x0, double y0, double x1, double y1, double thick,
                 const double color[3]) {
    int steps = static_cast<int>(std::ceil(std::hypot(x1 - x0, y1 - y0))) * 2 + 1;
    for (int i = 0; i <= steps; ++i) {
        double t = static_cast<double>(i) / steps;
        double px = x0 + t * (x1 - x0), py = y0 + t * (y1 - y0);
        int lo = static_cast<int>(std::floor(-thick)), hi = static_cast<int>(std::ceil(thick));
        for (int dy = lo; dy <= hi; ++dy) {
            for (int dx = lo; dx <= hi; ++dx) {
                if (dx * dx + dy * dy > thick * thick) continue;
                int xi = static_cast<int>(std::lround(px)) + dx;
                int yi = static_cast<int>(std::lround(py)) + dy;
                if (xi < 0 || xi >= img.w || yi < 0 || yi >= img.h) continue;
                for (int ci = 0; ci < img.c; ++ci) img.at(ci, yi, xi) = color[ci];
            }
        }
    }
}

}  // namespace

Image render_face(int side, Rng& rng) {
    Image face(3, side, side);
    // Hair/backdrop behind the head.
    double hair[3] = {rng.uniform(0.05, 0.3), rng.uniform(0.05, 0.25), rng.uniform(0.02, 0.2)};
    for (int ci = 0; ci < 3; ++ci) {
        std::fill_n(face.px.begin() + static_cast<std::ptrdiff_t>(ci) * side * side,
                    static_cast<std::size_t>(side) * side, hair[ci]);
    }

    const double cx = side / 2.0 + rng.uniform(-1.5, 1.5);
    const double cy = side / 2.0 + rng.uniform(-1.0, 2.0);
    const double tilt = rng.uniform(-0.15, 0.15);
    double skin[3] = {rng.uniform(0.65, 0.9), rng.uniform(0.5, 0.75), rng.uniform(0.4, 0.65)};
    fill_ellipse(face, cx, cy, side * 0.36, side * 0.44, tilt, skin, 1.0);

    // Landmarks: eyes with catchlights, brows, nose, mouth.
    double dark[3] = {0.08, 0.07, 0.09};
    double bright[3] = {0.95, 0.95, 0.95};
    double lip[3] = {rng.uniform(0.5, 0.75), 0.2, 0.25};
    const double eye_dx = side * rng.uniform(0.13, 0.17);
    const double eye_y = cy - side * 0.08;
    for (int e : {-1, 1}) {
        double ex = cx + e * eye_dx;
        fill_ellipse(face, ex, eye_y, side * 0.06, side * 0.04, 0.0, dark, 1.0);
        int px = static_cast<int>(std::lround(ex)), py = static_cast<int>(std::lround(eye_y));
        if (px >= 0 && px < side && py >= 0 && py < side) {
            for (int ci = 0; ci < 3; ++ci) face.at(ci, py, px) = bright[ci];
        }
        draw_stroke(face, ex - side * 0.07, eye_y - side * 0.08, ex + side * 0.07,
                    eye_y - side * 0.09, side * 0.012 + 0.4, dark);
    }
    draw_stroke(face, cx, cy - side * 0.02, cx + side * 0.02, cy + side * 0.1, side * 0.01 + 0.3,
                dark);
    draw_stroke(face, cx - side * 0.1, cy + side * 0.2, cx + side * 0.1, cy + side * 0.2,
                side * 0.015 + 0.5, lip);

    // Fine texture inside the head keeps the pattern high-frequency.
    for (int y = 0; y < side; ++y) {
        for (int x = 0; x < side; ++x) {
            double dx = (x - cx) / (side * 0.36), dy = (y - cy) / (side * 0.44);
            if (dx * dx + dy * dy <= 1.0) {
                double n = rng.uniform(-0.04, 0.04);
                for (int ci = 0; ci < 3; ++ci) {
                    face.at(ci, y, x) = std::clamp(face.at(ci, y, x) + n, 0.0, 1.0);
                }
            }
        }
    }
    return face;
}

std::vector<SceneSample> gen_scenes(int count, std::uint64_t seed, const GenConfig& cfg) {
    if (count <= 0) throw std::invalid_argument("gen_scenes: count must be > 0");
    if (cfg.face_sides.empty()) throw std::invalid_argument("gen_scenes: no face sides");
    std::vector<SceneSample> scenes;
    scenes.reserve(static_cast<std::size_t>(count));
    Rng root(seed);
    for (int i = 0; i < count; ++i) {
        Rng rng = root.fork(static_cast<std::uint64_t>(i));
        SceneSample scene;
        scene.image = Image(3, cfg.scene_h, cfg.scene_w);
        fill_background(scene.image, rng);

        const int nfaces = static_cast<int>(rng.uniform_int(cfg.min_faces, cfg.max_faces));
        for (int f = 0; f < nfaces; ++f) {
            int side = cfg.face_sides[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<std::int64_t>(cfg.face_sides.size()) - 1))];
            // Aligned placement; retry a few times to avoid overlaps.
            FaceRect rect;
            bool placed = false;
            for (int attempt = 0; attempt < 20 && !placed; ++attempt) {
                int max_x = (cfg.scene_w - side) / cfg.align;
                int max_y = (cfg.scene_h - side) / cfg.align;
                rect = {static_cast<int>(rng.uniform_int(0, max_x)) * cfg.align,
                        static_cast<int>(rng.uniform_int(0, max_y)) * cfg.align, side, side};
                placed = true;
                for (const FaceRect& other : scene.faces) {
                    bool overlap = rect.x < other.x + other.w && other.x < rect.x + rect.w &&
                                   rect.y < other.y + other.h && other.y < rect.y + rect.h;
                    if (overlap) placed = false;
                }
            }
            if (!placed) continue;

            Image face = render_face(side, rng);
            for (int ci = 0; ci < 3; ++ci) {
                for (int y = 0; y < side; ++y) {
                    for (int x = 0; x < side; ++x) {
                        scene.image.at(ci, rect.y + y, rect.x + x) = face.at(ci, y, x);
                    }
                }
            }
            scene.faces.push_back(rect);
            scene.face_images.push_back(std::move(face));
        }
        if (scene.faces.empty()) {
            // Extremely unlikely with the retry budget, but every scene must
            // carry at least one face.
            int side = cfg.face_sides[0];
            FaceRect rect{0, 0, side, side};
            Image face = render_face(side, rng);
            for (int ci = 0; ci < 3; ++ci) {
                for (int y = 0; y < side; ++y) {
                    for (int x = 0; x < side; ++x) {
                        scene.image.at(ci, rect.y + y, rect.x + x) = face.at(ci, y, x);
                    }
                }
            }
            scene.faces.push_back(rect);
            scene.face_images.push_back(std::move(face));
        }
        scenes.push_back(std::move(scene));
    }
    return scenes;
}

double face_area_fraction(const SceneSample& scene) {
    double area = 0.0;
    for (const FaceRect& r : scene.faces) area += static_cast<double>(r.w) * r.h;
    return area / (static_cast<double>(scene.image.h) * scene.image.w);
}

}  // namespace f2n::harness
