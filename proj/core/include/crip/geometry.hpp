#pragma once

#include <array>
#include <stdexcept>
#include <utility>
#include <vector>

namespace crip {

// Sampling geometry of the two square (Chebyshev) rings around a center
// pixel. The 8-bit code forces 8 inner directions, which pins the geometry
// to the full 3x3 shell (8 pixels) and 5x5 shell (16 pixels): the outer ring
// must carry exactly two pixels per inner direction so that outer indices
// 2*eta-1 .. 2*eta+1 stay angularly aligned with inner index eta.
struct RingGeometry {
    int inner_radius = 1;   // r1
    int outer_radius = 2;   // r2
    int inner_count = 8;    // p, pixels on the inner ring
    int outer_count = 16;   // q, pixels on the outer ring

    void validate() const {
        if (inner_radius < 1 || outer_radius <= inner_radius) {
            throw std::invalid_argument("ring radii must satisfy r2 > r1 >= 1");
        }
        if (inner_count != 8 * inner_radius || outer_count != 8 * outer_radius) {
            throw std::invalid_argument("ring pixel counts must cover the full square shells");
        }
        if (outer_count != 2 * inner_count) {
            throw std::invalid_argument("outer ring must hold twice the inner ring pixels");
        }
    }

    bool operator==(const RingGeometry&) const = default;
};

// Direction parity weight: 2 for even directions (diagonals in the default
// geometry), 1 for odd ones.
int parity_k(int eta, int p = 8);

// Direction parity offset: 0 for even directions, 1 for odd ones.
int parity_l(int eta, int p = 8);

// Non-negative remainder, e.g. mod_floor(-1, 8) == 7.
inline int mod_floor(int a, int m) {
    int r = a % m;
    return r < 0 ? r + m : r;
}

// (row, col) offsets of the full square shell at the given Chebyshev radius,
// enumerated clockwise starting at the top-left diagonal. radius 1 yields
// 8 offsets with index 1 = north; radius 2 yields 16 offsets with index 2 =
// north, so inner index eta and outer index 2*eta point the same way.
std::vector<std::pair<int, int>> chebyshev_ring_offsets(int radius);

// Fixed offset tables for the default geometry.
const std::array<std::pair<int, int>, 8>& inner_ring_offsets();
const std::array<std::pair<int, int>, 16>& outer_ring_offsets();

}  // namespace crip
