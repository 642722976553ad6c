#pragma once

#include <optional>

#include "crip/image.hpp"

namespace crip {

// Bilinear resample to the given dimensions. Sampling coordinates are
// center-aligned and clamp at the borders; interpolation uses the lerp form
// a + t*(b - a), which keeps constant images and size-preserving resizes
// exact and never leaves the input value range.
GrayImage resize_bilinear(const GrayImage& image, int out_width, int out_height);

// Returns the bbox sub-image; the rectangle must lie within the image.
GrayImage crop(const GrayImage& image, const Rect& bbox);

// Standard normalization step: optional crop, then bilinear resize to a
// target x target square. target must be at least 5 so the result can enter
// the descriptor.
GrayImage preprocess(const GrayImage& image, const std::optional<Rect>& bbox, int target);

}  // namespace crip
