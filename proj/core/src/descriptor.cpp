#include "crip/descriptor.hpp"

#include <cstddef>

namespace crip {

namespace {

// Precomputed ring indices and weights for one direction. Arithmetic here
// mirrors centroid_x / centroid_y term for term so that the fused scan stays
// bit-identical to the reference evaluation.
struct DirectionPlan {
    int x_low[2];     // (k-1)-weighted inner pair
    int x_anchor;     // inner pixel paired with the center at weight k
    int x_high[2];    // unit-weighted inner pair
    double x_km1;     // k - 1
    double x_k;       // k
    double x_den;     // 4k
    int y_inner[3];   // inner-ring members of the inter-radial subregion
    int y_inner_n;    // 3 for even eta, 1 for odd
    int y_outer[3];   // outer-ring members
    double y_den;     // 6 for even eta, 4 for odd
};

const std::array<DirectionPlan, 8>& direction_plans() {
    static const std::array<DirectionPlan, 8> plans = [] {
        std::array<DirectionPlan, 8> out{};
        for (int eta = 0; eta < 8; ++eta) {
            const int k = parity_k(eta);
            const int l = parity_l(eta);
            const int base = eta - l;
            DirectionPlan& p = out[eta];
            p.x_low[0] = mod_floor(base - 2, 8);
            p.x_low[1] = mod_floor(base - 1, 8);
            p.x_anchor = mod_floor(base, 8);
            p.x_high[0] = mod_floor(base + 1, 8);
            p.x_high[1] = mod_floor(base + 2, 8);
            p.x_km1 = static_cast<double>(k - 1);
            p.x_k = static_cast<double>(k);
            p.x_den = static_cast<double>(4 * k);
            if (l == 0) {
                p.y_inner[0] = mod_floor(eta - 1, 8);
                p.y_inner[1] = eta;
                p.y_inner[2] = mod_floor(eta + 1, 8);
                p.y_inner_n = 3;
            } else {
                p.y_inner[0] = eta;
                p.y_inner[1] = p.y_inner[2] = 0;
                p.y_inner_n = 1;
            }
            p.y_outer[0] = mod_floor(2 * eta - 1, 16);
            p.y_outer[1] = 2 * eta;
            p.y_outer[2] = mod_floor(2 * eta + 1, 16);
            p.y_den = static_cast<double>(2 * (2 * k - k / 2));
        }
        return out;
    }();
    return plans;
}

std::uint8_t eval_code(const double* r1, const double* r2, double center) {
    const auto& plans = direction_plans();
    int code = 0;
    for (int eta = 0; eta < 8; ++eta) {
        const DirectionPlan& p = plans[eta];
        const double low = r1[p.x_low[0]] + r1[p.x_low[1]];
        const double anchored = center + r1[p.x_anchor];
        const double high = r1[p.x_high[0]] + r1[p.x_high[1]];
        const double x = (p.x_km1 * low + p.x_k * anchored + high) / p.x_den;
        double inner = r1[p.y_inner[0]];
        if (p.y_inner_n == 3) {
            inner += r1[p.y_inner[1]];
            inner += r1[p.y_inner[2]];
        }
        double outer = r2[p.y_outer[0]];
        outer += r2[p.y_outer[1]];
        outer += r2[p.y_outer[2]];
        const double y = (inner + outer) / p.y_den;
        code |= sign_bit(y - x) << eta;
    }
    return static_cast<std::uint8_t>(code);
}

void check_map_input(const GrayImage& image, int min_side) {
    if (image.width() < min_side || image.height() < min_side) {
        throw std::invalid_argument("image too small for the descriptor");
    }
}

}  // namespace

Neighborhood sample_neighborhood(const GrayImage& image, int row, int col,
                                 const RingGeometry& geom) {
    geom.validate();
    if (row < 0 || row >= image.height() || col < 0 || col >= image.width()) {
        throw std::out_of_range("neighborhood center out of range");
    }
    Neighborhood nbh;
    nbh.center = image.at_clamped(row, col);
    const auto& r1 = inner_ring_offsets();
    const auto& r2 = outer_ring_offsets();
    for (int i = 0; i < 8; ++i) {
        nbh.ring1[i] = image.at_clamped(row + r1[i].first, col + r1[i].second);
    }
    for (int i = 0; i < 16; ++i) {
        nbh.ring2[i] = image.at_clamped(row + r2[i].first, col + r2[i].second);
    }
    return nbh;
}

double centroid_x(const Neighborhood& nbh, int eta) {
    const int k = parity_k(eta);
    const int l = parity_l(eta);
    const int base = eta - l;
    double low = 0.0;
    for (int i = base - 2; i <= base - 1; ++i) low += nbh.ring1[mod_floor(i, 8)];
    const double anchored = nbh.center + nbh.ring1[mod_floor(base, 8)];
    double high = 0.0;
    for (int i = base + 1; i <= base + 2; ++i) high += nbh.ring1[mod_floor(i, 8)];
    return (static_cast<double>(k - 1) * low + static_cast<double>(k) * anchored + high) /
           static_cast<double>(4 * k);
}

double centroid_y(const Neighborhood& nbh, int eta) {
    const int k = parity_k(eta);
    const int l = parity_l(eta);
    double inner = 0.0;
    for (int i = eta + l - 1; i <= eta - l + 1; ++i) inner += nbh.ring1[mod_floor(i, 8)];
    double outer = 0.0;
    for (int i = 2 * eta - 1; i <= 2 * eta + 1; ++i) outer += nbh.ring2[mod_floor(i, 16)];
    return (inner + outer) / static_cast<double>(2 * (2 * k - k / 2));
}

int crip_code(const Neighborhood& nbh, const RingGeometry& geom) {
    geom.validate();
    int code = 0;
    for (int eta = 0; eta < geom.inner_count; ++eta) {
        code |= sign_bit(centroid_y(nbh, eta) - centroid_x(nbh, eta)) << eta;
    }
    return code;
}

CodeMap crip_map(const GrayImage& image, const RingGeometry& geom) {
    geom.validate();
    check_map_input(image, 5);
    const int w = image.width();
    const int h = image.height();
    CodeMap map(w, h);

    const auto& r1off = inner_ring_offsets();
    const auto& r2off = outer_ring_offsets();
    std::array<std::ptrdiff_t, 8> flat1;
    std::array<std::ptrdiff_t, 16> flat2;
    for (int i = 0; i < 8; ++i) {
        flat1[i] = static_cast<std::ptrdiff_t>(r1off[i].first) * w + r1off[i].second;
    }
    for (int i = 0; i < 16; ++i) {
        flat2[i] = static_cast<std::ptrdiff_t>(r2off[i].first) * w + r2off[i].second;
    }

    const double* src = image.data().data();
    double r1[8];
    double r2[16];
    for (int r = 0; r < h; ++r) {
        const bool row_interior = r >= 2 && r < h - 2;
        for (int c = 0; c < w; ++c) {
            double center;
            if (row_interior && c >= 2 && c < w - 2) {
                const double* base = src + static_cast<std::size_t>(r) * w + c;
                center = *base;
                for (int i = 0; i < 8; ++i) r1[i] = base[flat1[i]];
                for (int i = 0; i < 16; ++i) r2[i] = base[flat2[i]];
            } else {
                center = image.at_clamped(r, c);
                for (int i = 0; i < 8; ++i) {
                    r1[i] = image.at_clamped(r + r1off[i].first, c + r1off[i].second);
                }
                for (int i = 0; i < 16; ++i) {
                    r2[i] = image.at_clamped(r + r2off[i].first, c + r2off[i].second);
                }
            }
            map.at(r, c) = eval_code(r1, r2, center);
        }
    }
    return map;
}

CodeMap crip_map_reference(const GrayImage& image, const RingGeometry& geom) {
    geom.validate();
    check_map_input(image, 5);
    CodeMap map(image.width(), image.height());
    for (int r = 0; r < image.height(); ++r) {
        for (int c = 0; c < image.width(); ++c) {
            map.at(r, c) = static_cast<std::uint8_t>(
                crip_code(sample_neighborhood(image, r, c, geom), geom));
        }
    }
    return map;
}

CodeMap lbp_map(const GrayImage& image) {
    check_map_input(image, 3);
    const int w = image.width();
    const int h = image.height();
    CodeMap map(w, h);
    const auto& offs = inner_ring_offsets();
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double center = image.at_clamped(r, c);
            int code = 0;
            for (int v = 0; v < 8; ++v) {
                const double nb = image.at_clamped(r + offs[v].first, c + offs[v].second);
                code |= sign_bit(nb - center) << v;
            }
            map.at(r, c) = static_cast<std::uint8_t>(code);
        }
    }
    return map;
}

}  // namespace crip
