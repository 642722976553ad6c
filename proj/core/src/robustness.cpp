#include "crip/robustness.hpp"

#include <stdexcept>

#include "crip/perturb.hpp"
#include "crip/text_format.hpp"

namespace crip {

double hamming_drift(const CodeMap& a, const CodeMap& b) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw std::invalid_argument("code maps differ in size");
    }
    const auto& ca = a.codes();
    const auto& cb = b.codes();
    std::size_t changed = 0;
    for (std::size_t i = 0; i < ca.size(); ++i) {
        if (ca[i] != cb[i]) ++changed;
    }
    return static_cast<double>(changed) / static_cast<double>(ca.size());
}

std::string PerturbationLevel::describe() const {
    if (kind == "affine") {
        return "affine gain=" + format_double(gain) + " offset=" + format_double(offset);
    }
    if (kind == "noise") {
        return "noise sigma=" + format_double(sigma);
    }
    return "resolution factor=" + std::to_string(factor);
}

GrayImage apply_perturbation(const GrayImage& image, const PerturbationLevel& level,
                             std::uint64_t noise_seed) {
    if (level.kind == "affine") return perturb_affine(image, level.gain, level.offset);
    if (level.kind == "noise") return perturb_noise(image, level.sigma, noise_seed);
    if (level.kind == "resolution") return perturb_resolution(image, level.factor);
    throw std::invalid_argument("unknown perturbation kind '" + level.kind + "'");
}

std::vector<PerturbationLevel> expand_levels(const std::string& kind,
                                             const std::vector<double>& gains,
                                             const std::vector<double>& offsets,
                                             const std::vector<double>& sigmas,
                                             const std::vector<int>& factors) {
    std::vector<PerturbationLevel> levels;
    if (kind == "affine") {
        const std::vector<double> gs = gains.empty() ? std::vector<double>{2.0} : gains;
        const std::vector<double> os = offsets.empty() ? std::vector<double>{0.0} : offsets;
        for (const double g : gs) {
            if (!(g > 0.0)) throw std::invalid_argument("affine gain must be positive");
            for (const double o : os) {
                PerturbationLevel lvl;
                lvl.kind = "affine";
                lvl.gain = g;
                lvl.offset = o;
                levels.push_back(lvl);
            }
        }
    } else if (kind == "noise") {
        const std::vector<double> ss = sigmas.empty() ? std::vector<double>{10.0} : sigmas;
        for (const double s : ss) {
            if (s < 0.0) throw std::invalid_argument("noise sigma must be non-negative");
            PerturbationLevel lvl;
            lvl.kind = "noise";
            lvl.sigma = s;
            levels.push_back(lvl);
        }
    } else if (kind == "resolution") {
        const std::vector<int> fs = factors.empty() ? std::vector<int>{2} : factors;
        for (const int f : fs) {
            if (f < 1) throw std::invalid_argument("resolution factor must be at least 1");
            PerturbationLevel lvl;
            lvl.kind = "resolution";
            lvl.factor = f;
            levels.push_back(lvl);
        }
    } else {
        throw std::invalid_argument("perturbation must be affine, noise or resolution");
    }
    return levels;
}

}  // namespace crip
