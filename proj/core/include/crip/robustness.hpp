#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crip/descriptor.hpp"

namespace crip {

// Fraction of positions whose code differs between two equally sized maps.
double hamming_drift(const CodeMap& a, const CodeMap& b);

// One point of a robustness sweep.
struct PerturbationLevel {
    std::string kind;    // affine | noise | resolution
    double gain = 1.0;
    double offset = 0.0;
    double sigma = 0.0;
    int factor = 1;

    std::string describe() const;
};

// Applies the level to an image; noise draws from the given seed.
GrayImage apply_perturbation(const GrayImage& image, const PerturbationLevel& level,
                             std::uint64_t noise_seed);

// Expands the CLI parameter vectors into concrete sweep levels (cross
// product for affine gains x offsets). Validates every value.
std::vector<PerturbationLevel> expand_levels(const std::string& kind,
                                             const std::vector<double>& gains,
                                             const std::vector<double>& offsets,
                                             const std::vector<double>& sigmas,
                                             const std::vector<int>& factors);

}  // namespace crip
