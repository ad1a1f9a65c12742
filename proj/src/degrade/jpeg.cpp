#include "f2n/degrade/jpeg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace f2n::degrade {

namespace {

constexpr int kBlock = 8;

constexpr double kLumaQuant[64] = {
    16, 11, 10, 16, 24,  40,  51,  61,   //
    12, 12, 14, 19, 26,  58,  60,  55,   //
    14, 13, 16, 24, 40,  57,  69,  56,   //
    14, 17, 22, 29, 51,  87,  80,  62,   //
    18, 22, 37, 56, 68,  109, 103, 77,   //
    24, 35, 55, 64, 81,  104, 113, 92,   //
    49, 64, 78, 87, 103, 121, 120, 101,  //
    72, 92, 95, 98, 112, 100, 103, 99};

struct DctTables {
    double cosines[kBlock][kBlock];  // cos((2x+1) u pi / 16)
    double cu[kBlock];               // 1/sqrt(2) for u=0, else 1
    DctTables() {
        for (int x = 0; x < kBlock; ++x) {
            for (int u = 0; u < kBlock; ++u) {
                cosines[x][u] = std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
            }
        }
        for (int u = 0; u < kBlock; ++u) cu[u] = u == 0 ? 1.0 / std::sqrt(2.0) : 1.0;
    }
};

const DctTables& tables() {
    static DctTables t;
    return t;
}

void dct8x8(const double in[kBlock][kBlock], double out[kBlock][kBlock]) {
    const DctTables& t = tables();
    for (int u = 0; u < kBlock; ++u) {
        for (int v = 0; v < kBlock; ++v) {
            double acc = 0.0;
            for (int y = 0; y < kBlock; ++y) {
                for (int x = 0; x < kBlock; ++x) {
                    acc += in[y][x] * t.cosines[y][u] * t.cosines[x][v];
                }
            }
            out[u][v] = 0.25 * t.cu[u] * t.cu[v] * acc;
        }
    }
}

void idct8x8(const double in[kBlock][kBlock], double out[kBlock][kBlock]) {
    const DctTables& t = tables();
    for (int y = 0; y < kBlock; ++y) {
        for (int x = 0; x < kBlock; ++x) {
            double acc = 0.0;
            for (int u = 0; u < kBlock; ++u) {
                for (int v = 0; v < kBlock; ++v) {
                    acc += t.cu[u] * t.cu[v] * in[u][v] * t.cosines[y][u] * t.cosines[x][v];
                }
            }
            out[y][x] = 0.25 * acc;
        }
    }
}

void quant_table(double quality, double qt[64]) {
    const double scale = quality < 50.0 ? 5000.0 / quality : 200.0 - 2.0 * quality;
    for (int i = 0; i < 64; ++i) {
        qt[i] = std::clamp(std::floor((kLumaQuant[i] * scale + 50.0) / 100.0), 1.0, 255.0);
    }
}

}  // namespace

Image compress(const Image& img, double quality) {
    if (quality < 10.0 || quality > 100.0) {
        throw std::invalid_argument("compress: quality must lie in [10,100]");
    }
    if (img.c != 1 && img.c != 3) throw std::invalid_argument("compress: expected 1 or 3 channels");

    const std::size_t plane = static_cast<std::size_t>(img.h) * img.w;
    std::vector<double> y(plane), cb, cr;
    if (img.c == 3) {
        cb.resize(plane);
        cr.resize(plane);
        for (std::size_t i = 0; i < plane; ++i) {
            const double r = img.px[i], g = img.px[plane + i], b = img.px[2 * plane + i];
            y[i] = 0.299 * r + 0.587 * g + 0.114 * b;
            cb[i] = -0.168736 * r - 0.331264 * g + 0.5 * b;
            cr[i] = 0.5 * r - 0.418688 * g - 0.081312 * b;
        }
    } else {
        y.assign(img.px.begin(), img.px.end());
    }

    double qt[64];
    quant_table(quality, qt);

    const int bh = (img.h + kBlock - 1) / kBlock;
    const int bw = (img.w + kBlock - 1) / kBlock;
    std::vector<double> y_out(plane);
    for (int by = 0; by < bh; ++by) {
        for (int bx = 0; bx < bw; ++bx) {
            double block[kBlock][kBlock], freq[kBlock][kBlock];
            for (int i = 0; i < kBlock; ++i) {
                for (int j = 0; j < kBlock; ++j) {
                    // Edge replication for partial blocks.
                    int sy = std::min(by * kBlock + i, img.h - 1);
                    int sx = std::min(bx * kBlock + j, img.w - 1);
                    block[i][j] = y[static_cast<std::size_t>(sy) * img.w + sx] * 255.0 - 128.0;
                }
            }
            dct8x8(block, freq);
            for (int u = 0; u < kBlock; ++u) {
                for (int v = 0; v < kBlock; ++v) {
                    if (u == 0 && v == 0) continue;  // DC passthrough
                    const double q = qt[u * kBlock + v];
                    freq[u][v] = std::round(freq[u][v] / q) * q;
                }
            }
            idct8x8(freq, block);
            for (int i = 0; i < kBlock; ++i) {
                int sy = by * kBlock + i;
                if (sy >= img.h) break;
                for (int j = 0; j < kBlock; ++j) {
                    int sx = bx * kBlock + j;
                    if (sx >= img.w) break;
                    y_out[static_cast<std::size_t>(sy) * img.w + sx] = (block[i][j] + 128.0) / 255.0;
                }
            }
        }
    }

    Image out(img.c, img.h, img.w);
    if (img.c == 3) {
        for (std::size_t i = 0; i < plane; ++i) {
            const double yy = y_out[i], cbb = cb[i], crr = cr[i];
            out.px[i] = yy + 1.402 * crr;
            out.px[plane + i] = yy - 0.344136 * cbb - 0.714136 * crr;
            out.px[2 * plane + i] = yy + 1.772 * cbb;
        }
    } else {
        out.px = y_out;
    }
    return clip01(std::move(out));
}

}  // namespace f2n::degrade
