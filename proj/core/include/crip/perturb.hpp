#pragma once

#include <cstdint>

#include "crip/image.hpp"

namespace crip {

// Global illumination change: every pixel maps to gain*v + offset. The
// pipeline is real-valued and never clips, so the descriptor's invariance
// under this map is exactly testable.
GrayImage perturb_affine(const GrayImage& image, double gain, double offset);

// Adds zero-mean Gaussian noise of standard deviation sigma, drawn
// per pixel from a self-contained Box-Muller transform over mt19937_64 so a
// fixed seed reproduces the exact same image.
GrayImage perturb_noise(const GrayImage& image, double sigma, std::uint64_t seed);

// Simulates low resolution at constant geometry: bilinear downsample by the
// integer factor, then bilinear upsample back to the original size.
GrayImage perturb_resolution(const GrayImage& image, int factor);

}  // namespace crip
