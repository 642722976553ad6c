#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "crip/geometry.hpp"
#include "crip/image.hpp"

namespace crip {

// The 25 intensities entering one descriptor evaluation: the center pixel
// plus both square rings, each enumerated clockwise from the top-left
// diagonal. ring2 index 2*eta lies in the same direction as ring1 index eta.
struct Neighborhood {
    double center = 0.0;
    std::array<double, 8> ring1{};
    std::array<double, 16> ring2{};
};

// Per-pixel 8-bit code raster, same dimensions as the source image.
class CodeMap {
public:
    CodeMap() = default;
    CodeMap(int width, int height)
        : width_(width), height_(height),
          codes_(static_cast<std::size_t>(width) * height, 0) {}

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return codes_.size(); }

    std::uint8_t at(int row, int col) const {
        return codes_[static_cast<std::size_t>(row) * width_ + col];
    }
    std::uint8_t& at(int row, int col) {
        return codes_[static_cast<std::size_t>(row) * width_ + col];
    }

    const std::vector<std::uint8_t>& codes() const { return codes_; }

    bool operator==(const CodeMap&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> codes_;
};

// Gathers the center and both rings at (row, col); out-of-image coordinates
// read via replicate padding.
Neighborhood sample_neighborhood(const GrayImage& image, int row, int col,
                                 const RingGeometry& geom = {});

// Inner-ring centroid for direction eta: a weighted mean of the center and
// inner-ring pixels. Even eta (diagonal) weights the center and the anchor
// pixel ring1[eta] twice against the four flanking ring pixels (sum 8);
// odd eta averages the center with ring1[eta-1 .. eta+1] (sum 4). Ring
// indices wrap with non-negative remainders.
double centroid_x(const Neighborhood& nbh, int eta);

// Inter-radial centroid for direction eta: the plain mean of the subregion
// spanning both rings. Even eta averages ring1[eta-1 .. eta+1] with
// ring2[2*eta-1 .. 2*eta+1] (six pixels); odd eta averages ring1[eta] with
// the same three outer pixels (four pixels).
double centroid_y(const Neighborhood& nbh, int eta);

// Thresholding step of the code: 1 when t >= 0, else 0.
inline int sign_bit(double t) { return t >= 0.0 ? 1 : 0; }

// 8-bit code of one neighborhood: bit eta set when the inter-radial centroid
// meets or exceeds the inner centroid in direction eta.
int crip_code(const Neighborhood& nbh, const RingGeometry& geom = {});

// Code map over the whole image (replicate-padded borders). Optimized
// table-driven scan; bit-identical to crip_map_reference.
CodeMap crip_map(const GrayImage& image, const RingGeometry& geom = {});

// Naive per-pixel evaluation through sample_neighborhood / centroid_x /
// centroid_y / crip_code. Serves as the reference oracle for crip_map.
CodeMap crip_map_reference(const GrayImage& image, const RingGeometry& geom = {});

// Classic 8-neighbor LBP baseline: bit v is set when ring1 neighbor v meets
// or exceeds the center. Same clockwise ordering and replicate padding as
// the ripple descriptor.
CodeMap lbp_map(const GrayImage& image);

}  // namespace crip
