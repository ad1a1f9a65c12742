#include "f2n/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace f2n {

namespace {
std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}
}  // namespace

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("Rng::uniform_int: lo > hi");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    // Modulo bias is negligible for desk-scale spans (<< 2^64).
    return lo + static_cast<std::int64_t>(next_u64() % span);
}

double Rng::normal() {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Rng::choice(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw std::invalid_argument("Rng::choice: weights sum to zero");
    double r = uniform() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        r -= weights[i];
        if (r < 0.0) return i;
    }
    return weights.size() - 1;
}

Rng Rng::fork(std::string_view tag) const {
    std::uint64_t h = fnv1a(14695981039346656037ull, &seed_, sizeof(seed_));
    h = fnv1a(h, tag.data(), tag.size());
    return Rng(h);
}

Rng Rng::fork(std::uint64_t tag) const {
    std::uint64_t h = fnv1a(14695981039346656037ull, &seed_, sizeof(seed_));
    h = fnv1a(h, &tag, sizeof(tag));
    return Rng(h);
}

}  // namespace f2n
