#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace crip {

// Fully resolved batch-run configuration; one instance drives one command.
struct RunConfig {
    std::string command;            // extract | eval | perturb
    std::string manifest_path;
    std::string descriptor = "crip";
    int image_size = 128;
    int block_size = 16;
    bool normalize = false;
    std::string kernel = "linear";
    double c = 1.0;
    std::string protocol = "pd";    // pd | kfold | loso
    int k = 10;
    int repeats = 5;
    double ratio = 0.8;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::vector<std::string> class_filter;  // empty = all classes
    bool save_maps = false;                 // debug PGM export of code maps

    std::string perturb_kind;               // affine | noise | resolution
    std::vector<double> gains;
    std::vector<double> offsets;
    std::vector<double> sigmas;
    std::vector<int> factors;
};

// Extracts the feature matrix for every manifest image into
// <out>/features.csv. Corrupt images are skipped with a warning; any skip
// makes the exit status nonzero.
int cmd_extract(const RunConfig& config, std::ostream& log, std::ostream& err);

// Runs the configured cross-validation protocol and writes report.txt,
// confusion.csv and config.txt into the output directory.
int cmd_eval(const RunConfig& config, std::ostream& log, std::ostream& err);

// Measures per-sample code-map Hamming drift under a perturbation sweep for
// both descriptors; writes drift.csv and summary.csv.
int cmd_perturb(const RunConfig& config, std::ostream& log, std::ostream& err);

}  // namespace crip
