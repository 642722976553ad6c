#pragma once

#include <string>

#include "crip/descriptor.hpp"
#include "crip/image.hpp"

namespace crip {

// Loads a grayscale image. Supported containers: binary (P5) and ASCII (P2)
// 8-bit PGM, and 8-bit PNG (grayscale, gray+alpha, palette, RGB, RGBA; color
// is reduced with the Rec. 601 luma weights 0.299/0.587/0.114).
GrayImage load_image(const std::string& path);

// Writes an 8-bit binary PGM; intensities are clamped to [0, 255] and
// rounded to the nearest integer.
void save_pgm(const GrayImage& image, const std::string& path);

// Debug export of a code map as an 8-bit binary PGM (codes as intensities).
void save_pgm(const CodeMap& map, const std::string& path);

}  // namespace crip
