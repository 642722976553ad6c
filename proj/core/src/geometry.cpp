#include "crip/geometry.hpp"

namespace crip {

namespace {

void check_eta(int eta, int p) {
    if (eta < 0 || eta >= p) {
        throw std::out_of_range("direction index out of range");
    }
}

template <std::size_t N>
std::array<std::pair<int, int>, N> ring_array(int radius) {
    const auto v = chebyshev_ring_offsets(radius);
    std::array<std::pair<int, int>, N> a{};
    for (std::size_t i = 0; i < N; ++i) a[i] = v[i];
    return a;
}

}  // namespace

int parity_k(int eta, int p) {
    check_eta(eta, p);
    return (eta + 1) % 2 + 1;
}

int parity_l(int eta, int p) {
    check_eta(eta, p);
    return eta % 2;
}

std::vector<std::pair<int, int>> chebyshev_ring_offsets(int radius) {
    if (radius < 1) {
        throw std::invalid_argument("ring radius must be positive");
    }
    std::vector<std::pair<int, int>> offsets;
    offsets.reserve(static_cast<std::size_t>(8) * radius);
    // top edge, left to right
    for (int dc = -radius; dc < radius; ++dc) offsets.emplace_back(-radius, dc);
    // right edge, top to bottom
    for (int dr = -radius; dr < radius; ++dr) offsets.emplace_back(dr, radius);
    // bottom edge, right to left
    for (int dc = radius; dc > -radius; --dc) offsets.emplace_back(radius, dc);
    // left edge, bottom to top
    for (int dr = radius; dr > -radius; --dr) offsets.emplace_back(dr, -radius);
    return offsets;
}

const std::array<std::pair<int, int>, 8>& inner_ring_offsets() {
    static const auto table = ring_array<8>(1);
    return table;
}

const std::array<std::pair<int, int>, 16>& outer_ring_offsets() {
    static const auto table = ring_array<16>(2);
    return table;
}

}  // namespace crip
