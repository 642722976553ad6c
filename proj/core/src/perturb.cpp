#include "crip/perturb.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "crip/preprocess.hpp"

namespace crip {

GrayImage perturb_affine(const GrayImage& image, double gain, double offset) {
    if (!(gain > 0.0)) {
        throw std::invalid_argument("affine gain must be positive");
    }
    GrayImage out = image;
    for (double& v : out.data()) v = gain * v + offset;
    return out;
}

GrayImage perturb_noise(const GrayImage& image, double sigma, std::uint64_t seed) {
    if (sigma < 0.0) {
        throw std::invalid_argument("noise sigma must be non-negative");
    }
    if (sigma == 0.0) return image;
    GrayImage out = image;
    std::mt19937_64 rng(seed);
    constexpr double kInv53 = 0x1.0p-53;
    for (double& v : out.data()) {
        // one uniform pair per pixel; u1 in (0, 1], u2 in [0, 1)
        const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * kInv53;
        const double u2 = static_cast<double>(rng() >> 11) * kInv53;
        const double z = std::sqrt(-2.0 * std::log(u1)) *
                         std::cos(2.0 * std::numbers::pi * u2);
        v += sigma * z;
    }
    return out;
}

GrayImage perturb_resolution(const GrayImage& image, int factor) {
    if (factor < 1) {
        throw std::invalid_argument("resolution factor must be at least 1");
    }
    if (factor == 1) return image;
    const int small_w = std::max(1, static_cast<int>(std::lround(
                               static_cast<double>(image.width()) / factor)));
    const int small_h = std::max(1, static_cast<int>(std::lround(
                               static_cast<double>(image.height()) / factor)));
    const GrayImage small = resize_bilinear(image, small_w, small_h);
    return resize_bilinear(small, image.width(), image.height());
}

}  // namespace crip
