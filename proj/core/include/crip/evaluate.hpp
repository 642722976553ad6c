#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "crip/manifest.hpp"
#include "crip/svm.hpp"

namespace crip {

// One train/test split over sample indices.
struct Fold {
    std::vector<int> train;
    std::vector<int> test;
};

// A full cross-validation plan. Protocol ids: "pd" (random 80:20 repeats),
// "kfold" (subject-disjoint k folds), "loso" (leave one subject out),
// "custom" (caller-supplied folds, index-disjointness still reported).
struct SplitPlan {
    std::string protocol;
    std::vector<Fold> folds;
    std::uint64_t seed = 0;
};

// Random train/test repeats at the given train ratio, stratified by class
// where class counts permit. Every repeat's test size equals
// round((1-ratio)*n) whenever that leaves one training sample per class.
SplitPlan split_person_dependent(const DatasetManifest& manifest, double ratio = 0.8,
                                 int repeats = 5, std::uint64_t seed = 0);

// Subjects are shuffled by the seed and cut into k near-equal groups; fold i
// tests group i's samples and trains on the rest.
SplitPlan split_subject_kfold(const DatasetManifest& manifest, int k = 10,
                              std::uint64_t seed = 0);

// One fold per subject, in manifest subject order.
SplitPlan split_loso(const DatasetManifest& manifest);

// Recognition accuracy in percent: 100 * correct / total.
double accuracy(const std::vector<std::string>& predictions,
                const std::vector<std::string>& truths);

struct ConfusionMatrix {
    std::vector<std::string> classes;
    std::vector<std::vector<long>> counts;  // counts[true][predicted]

    long total() const;
    long trace() const;
    void add(const ConfusionMatrix& other);
};

ConfusionMatrix confusion(const std::vector<std::string>& predictions,
                          const std::vector<std::string>& truths,
                          const std::vector<std::string>& classes);

// Pipeline settings echoed into every report.
struct PipelineConfig {
    std::string descriptor = "crip";  // crip | lbp
    int image_size = 128;
    int block_size = 16;
    bool normalize = false;
    std::string kernel = "linear";
    double c = 1.0;
    std::uint64_t seed = 0;
};

struct FoldResult {
    int train_size = 0;
    int test_size = 0;
    double accuracy = 0.0;
};

struct EvalReport {
    std::string protocol;
    PipelineConfig config;
    std::vector<std::string> classes;
    std::vector<FoldResult> folds;
    double mean_accuracy = 0.0;
    ConfusionMatrix matrix;
    bool plan_compliant = true;
    std::vector<std::string> notes;

    std::vector<double> fold_accuracies() const;
};

// Cross-validation engine over precomputed feature vectors. Training never
// sees test rows; subject-disjointness of every executed fold is re-asserted
// here for the subject-based protocols, and index overlap between train and
// test flags the report as non-compliant.
EvalReport evaluate_features(const std::vector<std::vector<double>>& features,
                             const std::vector<std::string>& labels,
                             const std::vector<std::string>& subjects,
                             const std::vector<std::string>& classes,
                             const SplitPlan& plan, const PipelineConfig& config);

// Full pipeline: load + preprocess each manifest image once, compute the
// configured descriptor's code map and block-histogram features, then run
// the plan through evaluate_features.
EvalReport run_protocol(const DatasetManifest& manifest, const PipelineConfig& config,
                        const SplitPlan& plan);

// Structured text report (one document per run).
void write_report(std::ostream& out, const EvalReport& report);

// Machine-readable confusion export.
void write_confusion_csv(std::ostream& out, const ConfusionMatrix& matrix);

}  // namespace crip
