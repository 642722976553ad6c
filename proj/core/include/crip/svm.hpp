#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace crip {

struct SvmTrainOptions {
    double c = 1.0;
    std::string kernel = "linear";
    double tolerance = 1e-3;  // stop when the max KKT violation falls below this
    int max_passes = 1000;
    std::uint64_t seed = 0;   // pins the coordinate visit order
};

// Soft-margin binary classifier for one class pair. The linear kernel keeps
// the primal weight vector; decision(x) = <w, x> + bias. The positive label
// wins ties at exactly 0.
struct BinarySvm {
    std::string positive_label;
    std::string negative_label;
    std::vector<double> weights;
    double bias = 0.0;
    std::string kernel = "linear";
    double c = 1.0;
    bool converged = true;
    int passes = 0;

    double decision(std::span<const double> x) const;
};

// Featurization metadata carried for input validation; zeros mean the model
// was trained on raw vectors rather than block histograms.
struct FeatureMeta {
    int block_size = 0;
    int bins = 0;
    bool normalize = false;
};

// One-against-one multiclass composition: one binary machine per unordered
// class pair, ordered (0,1), (0,2), ..., (1,2), ...; the earlier class in
// the class list takes the positive role.
struct SvmModel {
    std::vector<std::string> classes;
    std::vector<BinarySvm> machines;
    std::size_t feature_dim = 0;
    FeatureMeta meta;
    std::string kernel = "linear";
    double c = 1.0;
};

// Trains one soft-margin machine by dual coordinate descent on the hinge
// loss, bias handled as an augmented unit feature. Deterministic for a fixed
// input order and seed; warns on stderr when the pass cap is hit before the
// KKT tolerance.
BinarySvm train_binary(const std::vector<std::vector<double>>& features,
                       const std::vector<int>& labels,
                       const SvmTrainOptions& options = {});

// Trains C(n_classes, 2) pairwise machines, each on its pair's samples only.
// `classes` fixes the class order explicitly; when empty it is derived from
// the labels in first-appearance order.
SvmModel train_multiclass(const std::vector<std::vector<double>>& features,
                          const std::vector<std::string>& labels,
                          const SvmTrainOptions& options = {},
                          const FeatureMeta& meta = {},
                          std::vector<std::string> classes = {});

// Majority vote over the pairwise machines. Vote ties break by the largest
// sum of winning decision margins, then by class-list order.
std::string predict(const SvmModel& model, std::span<const double> x);

// Versioned plain-text model file; a round trip reproduces identical
// predictions.
void save_model(const SvmModel& model, const std::string& path);
SvmModel load_model(const std::string& path);

}  // namespace crip
