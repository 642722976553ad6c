#include "crip/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "crip/descriptor.hpp"
#include "crip/featurize.hpp"
#include "crip/image_io.hpp"
#include "crip/preprocess.hpp"
#include "crip/random.hpp"
#include "crip/text_format.hpp"

namespace crip {

namespace {

std::vector<std::vector<int>> indices_by_class(const DatasetManifest& m) {
    std::unordered_map<std::string, std::size_t> pos;
    for (std::size_t k = 0; k < m.classes.size(); ++k) pos[m.classes[k]] = k;
    std::vector<std::vector<int>> groups(m.classes.size());
    for (std::size_t i = 0; i < m.samples.size(); ++i) {
        groups[pos.at(m.samples[i].label)].push_back(static_cast<int>(i));
    }
    return groups;
}

void validate_pipeline_config(const PipelineConfig& config) {
    if (config.descriptor != "crip" && config.descriptor != "lbp") {
        throw std::invalid_argument("descriptor must be 'crip' or 'lbp'");
    }
    if (config.image_size < 5) throw std::invalid_argument("image size must be at least 5");
    if (config.block_size < 1) throw std::invalid_argument("block size must be at least 1");
    if (!(config.c > 0.0)) throw std::invalid_argument("regularization C must be positive");
}

}  // namespace

SplitPlan split_person_dependent(const DatasetManifest& manifest, double ratio, int repeats,
                                 std::uint64_t seed) {
    const std::size_t n = manifest.samples.size();
    if (n < 5) throw std::invalid_argument("too few samples for a person-dependent split");
    if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("ratio must lie in (0, 1)");
    if (repeats < 1) throw std::invalid_argument("repeats must be at least 1");

    const auto groups = indices_by_class(manifest);
    long test_total = std::lround((1.0 - ratio) * static_cast<double>(n));
    test_total = std::clamp(test_total, 1L, static_cast<long>(n) - 1);

    SplitPlan plan;
    plan.protocol = "pd";
    plan.seed = seed;
    for (int rep = 0; rep < repeats; ++rep) {
        std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(rep)));
        std::vector<std::vector<int>> shuffled = groups;
        for (auto& g : shuffled) deterministic_shuffle(g, rng);

        // per-class test quota by largest remainder, keeping one training
        // sample per class whenever the class has any to spare
        const std::size_t k_classes = shuffled.size();
        std::vector<long> quota(k_classes, 0);
        std::vector<double> frac(k_classes, 0.0);
        long assigned = 0;
        for (std::size_t k = 0; k < k_classes; ++k) {
            const double exact = static_cast<double>(test_total) *
                                 static_cast<double>(shuffled[k].size()) / static_cast<double>(n);
            quota[k] = static_cast<long>(std::floor(exact));
            frac[k] = exact - static_cast<double>(quota[k]);
            const long cap = std::max<long>(static_cast<long>(shuffled[k].size()) - 1, 0);
            if (quota[k] > cap) quota[k] = cap;
            assigned += quota[k];
        }
        std::vector<std::size_t> by_frac(k_classes);
        std::iota(by_frac.begin(), by_frac.end(), std::size_t{0});
        std::stable_sort(by_frac.begin(), by_frac.end(),
                         [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
        // first pass respects the keep-one cap, second pass relaxes it
        for (int relax = 0; relax < 2 && assigned < test_total; ++relax) {
            for (const std::size_t k : by_frac) {
                if (assigned == test_total) break;
                const long cap = relax == 0
                                     ? std::max<long>(static_cast<long>(shuffled[k].size()) - 1, 0)
                                     : static_cast<long>(shuffled[k].size());
                if (quota[k] < cap) {
                    ++quota[k];
                    ++assigned;
                }
            }
            if (relax == 0 && assigned < test_total) {
                // keep cycling within the capped pass while it still helps
                long before = -1;
                while (assigned < test_total && before != assigned) {
                    before = assigned;
                    for (const std::size_t k : by_frac) {
                        if (assigned == test_total) break;
                        const long cap =
                            std::max<long>(static_cast<long>(shuffled[k].size()) - 1, 0);
                        if (quota[k] < cap) {
                            ++quota[k];
                            ++assigned;
                        }
                    }
                }
            }
        }

        Fold fold;
        for (std::size_t k = 0; k < k_classes; ++k) {
            for (std::size_t i = 0; i < shuffled[k].size(); ++i) {
                if (static_cast<long>(i) < quota[k]) {
                    fold.test.push_back(shuffled[k][i]);
                } else {
                    fold.train.push_back(shuffled[k][i]);
                }
            }
        }
        std::sort(fold.train.begin(), fold.train.end());
        std::sort(fold.test.begin(), fold.test.end());
        plan.folds.push_back(std::move(fold));
    }
    return plan;
}

SplitPlan split_subject_kfold(const DatasetManifest& manifest, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("k must be at least 2");
    const std::size_t n_subjects = manifest.subjects.size();
    if (n_subjects < static_cast<std::size_t>(k)) {
        throw std::invalid_argument("fewer subjects than folds");
    }
    std::vector<std::string> subjects = manifest.subjects;
    std::mt19937_64 rng(derive_seed(seed, 0));
    deterministic_shuffle(subjects, rng);

    std::unordered_map<std::string, std::vector<int>> by_subject;
    for (std::size_t i = 0; i < manifest.samples.size(); ++i) {
        by_subject[manifest.samples[i].subject_id].push_back(static_cast<int>(i));
    }

    SplitPlan plan;
    plan.protocol = "kfold";
    plan.seed = seed;
    const std::size_t base = n_subjects / static_cast<std::size_t>(k);
    const std::size_t extra = n_subjects % static_cast<std::size_t>(k);
    std::size_t cursor = 0;
    for (int f = 0; f < k; ++f) {
        const std::size_t size = base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
        std::unordered_set<std::string> test_subjects;
        for (std::size_t i = 0; i < size; ++i) test_subjects.insert(subjects[cursor++]);
        Fold fold;
        for (std::size_t i = 0; i < manifest.samples.size(); ++i) {
            if (test_subjects.count(manifest.samples[i].subject_id)) {
                fold.test.push_back(static_cast<int>(i));
            } else {
                fold.train.push_back(static_cast<int>(i));
            }
        }
        plan.folds.push_back(std::move(fold));
    }
    return plan;
}

SplitPlan split_loso(const DatasetManifest& manifest) {
    if (manifest.subjects.size() < 2) {
        throw std::invalid_argument("leave-one-subject-out needs at least 2 subjects");
    }
    SplitPlan plan;
    plan.protocol = "loso";
    plan.seed = 0;
    for (const auto& subject : manifest.subjects) {
        Fold fold;
        for (std::size_t i = 0; i < manifest.samples.size(); ++i) {
            if (manifest.samples[i].subject_id == subject) {
                fold.test.push_back(static_cast<int>(i));
            } else {
                fold.train.push_back(static_cast<int>(i));
            }
        }
        plan.folds.push_back(std::move(fold));
    }
    return plan;
}

double accuracy(const std::vector<std::string>& predictions,
                const std::vector<std::string>& truths) {
    if (predictions.empty()) throw std::invalid_argument("empty prediction list");
    if (predictions.size() != truths.size()) {
        throw std::invalid_argument("prediction/truth count mismatch");
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i] == truths[i]) ++correct;
    }
    return 100.0 * static_cast<double>(correct) / static_cast<double>(predictions.size());
}

long ConfusionMatrix::total() const {
    long t = 0;
    for (const auto& row : counts) t = std::accumulate(row.begin(), row.end(), t);
    return t;
}

long ConfusionMatrix::trace() const {
    long t = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) t += counts[i][i];
    return t;
}

void ConfusionMatrix::add(const ConfusionMatrix& other) {
    if (other.classes != classes) {
        throw std::invalid_argument("confusion matrices over different class lists");
    }
    for (std::size_t i = 0; i < counts.size(); ++i) {
        for (std::size_t j = 0; j < counts[i].size(); ++j) counts[i][j] += other.counts[i][j];
    }
}

ConfusionMatrix confusion(const std::vector<std::string>& predictions,
                          const std::vector<std::string>& truths,
                          const std::vector<std::string>& classes) {
    if (predictions.size() != truths.size()) {
        throw std::invalid_argument("prediction/truth count mismatch");
    }
    ConfusionMatrix m;
    m.classes = classes;
    m.counts.assign(classes.size(), std::vector<long>(classes.size(), 0));
    const auto index_of = [&](const std::string& label) {
        const auto it = std::find(classes.begin(), classes.end(), label);
        if (it == classes.end()) throw std::invalid_argument("unknown label '" + label + "'");
        return static_cast<std::size_t>(it - classes.begin());
    };
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        ++m.counts[index_of(truths[i])][index_of(predictions[i])];
    }
    return m;
}

std::vector<double> EvalReport::fold_accuracies() const {
    std::vector<double> out;
    out.reserve(folds.size());
    for (const auto& f : folds) out.push_back(f.accuracy);
    return out;
}

EvalReport evaluate_features(const std::vector<std::vector<double>>& features,
                             const std::vector<std::string>& labels,
                             const std::vector<std::string>& subjects,
                             const std::vector<std::string>& classes, const SplitPlan& plan,
                             const PipelineConfig& config) {
    validate_pipeline_config(config);
    const std::size_t n = features.size();
    if (labels.size() != n) throw std::invalid_argument("feature/label count mismatch");
    if (!subjects.empty() && subjects.size() != n) {
        throw std::invalid_argument("feature/subject count mismatch");
    }
    if (plan.folds.empty()) throw std::invalid_argument("plan has no folds");
    const bool subject_based = plan.protocol == "kfold" || plan.protocol == "loso";
    if (subject_based && subjects.empty()) {
        throw std::invalid_argument("subject-based plan needs subject ids");
    }

    EvalReport report;
    report.protocol = plan.protocol;
    report.config = config;
    report.classes = classes;
    report.matrix.classes = classes;
    report.matrix.counts.assign(classes.size(), std::vector<long>(classes.size(), 0));

    for (std::size_t f = 0; f < plan.folds.size(); ++f) {
        const Fold& fold = plan.folds[f];
        try {
            if (fold.train.empty() || fold.test.empty()) {
                throw std::invalid_argument("empty train or test side");
            }
            for (const int i : fold.train) {
                if (i < 0 || static_cast<std::size_t>(i) >= n) {
                    throw std::invalid_argument("train index out of range");
                }
            }
            for (const int i : fold.test) {
                if (i < 0 || static_cast<std::size_t>(i) >= n) {
                    throw std::invalid_argument("test index out of range");
                }
            }
            {
                std::set<int> train_set(fold.train.begin(), fold.train.end());
                bool overlap = false;
                for (const int i : fold.test) {
                    if (train_set.count(i)) {
                        overlap = true;
                        break;
                    }
                }
                if (overlap) {
                    report.plan_compliant = false;
                    report.notes.push_back("non-compliant plan: fold " + std::to_string(f) +
                                           " shares samples between train and test");
                }
            }
            if (subject_based) {
                std::unordered_set<std::string> train_subjects;
                for (const int i : fold.train) train_subjects.insert(subjects[i]);
                for (const int i : fold.test) {
                    if (train_subjects.count(subjects[i])) {
                        throw std::runtime_error("subject leakage: subject '" + subjects[i] +
                                                 "' appears on both sides");
                    }
                }
            }

            std::vector<std::vector<double>> train_features;
            std::vector<std::string> train_labels;
            train_features.reserve(fold.train.size());
            for (const int i : fold.train) {
                train_features.push_back(features[i]);
                train_labels.push_back(labels[i]);
            }
            // restrict the class list to classes present in this training
            // side, preserving the global order
            std::vector<std::string> train_classes;
            for (const auto& c : classes) {
                if (std::find(train_labels.begin(), train_labels.end(), c) != train_labels.end()) {
                    train_classes.push_back(c);
                }
            }
            SvmTrainOptions options;
            options.c = config.c;
            options.kernel = config.kernel;
            options.seed = derive_seed(config.seed, f + 1);
            FeatureMeta meta{config.block_size, kCodeBins, config.normalize};
            const SvmModel model =
                train_multiclass(train_features, train_labels, options, meta, train_classes);

            std::vector<std::string> predictions;
            std::vector<std::string> truths;
            predictions.reserve(fold.test.size());
            for (const int i : fold.test) {
                predictions.push_back(predict(model, features[i]));
                truths.push_back(labels[i]);
            }
            FoldResult result;
            result.train_size = static_cast<int>(fold.train.size());
            result.test_size = static_cast<int>(fold.test.size());
            result.accuracy = accuracy(predictions, truths);
            report.folds.push_back(result);
            report.matrix.add(confusion(predictions, truths, classes));
        } catch (const std::exception& e) {
            throw std::runtime_error("fold " + std::to_string(f) + ": " + e.what());
        }
    }
    double sum = 0.0;
    for (const auto& fr : report.folds) sum += fr.accuracy;
    report.mean_accuracy = sum / static_cast<double>(report.folds.size());
    return report;
}

EvalReport run_protocol(const DatasetManifest& manifest, const PipelineConfig& config,
                        const SplitPlan& plan) {
    validate_pipeline_config(config);
    std::vector<std::vector<double>> features;
    std::vector<std::string> labels;
    std::vector<std::string> subjects;
    features.reserve(manifest.samples.size());
    for (const auto& sample : manifest.samples) {
        try {
            const GrayImage raw = load_image(sample.image_path);
            const GrayImage img = preprocess(raw, sample.bbox, config.image_size);
            const CodeMap map = config.descriptor == "crip" ? crip_map(img) : lbp_map(img);
            features.push_back(feature_vector(map, config.block_size, config.normalize).values);
        } catch (const std::exception& e) {
            throw std::runtime_error(sample.image_path + ": " + e.what());
        }
        labels.push_back(sample.label);
        subjects.push_back(sample.subject_id);
    }
    return evaluate_features(features, labels, subjects, manifest.classes, plan, config);
}

void write_report(std::ostream& out, const EvalReport& report) {
    out << "crip-eval-report 1\n";
    out << "protocol " << report.protocol << "\n";
    out << "descriptor " << report.config.descriptor << "\n";
    out << "image_size " << report.config.image_size << "\n";
    out << "block_size " << report.config.block_size << "\n";
    out << "normalize " << (report.config.normalize ? 1 : 0) << "\n";
    out << "kernel " << report.config.kernel << "\n";
    out << "c " << format_double(report.config.c) << "\n";
    out << "seed " << report.config.seed << "\n";
    out << "classes";
    for (const auto& c : report.classes) out << " " << c;
    out << "\n";
    out << "plan_compliant " << (report.plan_compliant ? 1 : 0) << "\n";
    for (const auto& note : report.notes) out << "note " << note << "\n";
    out << "folds " << report.folds.size() << "\n";
    for (std::size_t f = 0; f < report.folds.size(); ++f) {
        const auto& fr = report.folds[f];
        out << "fold " << f << " train " << fr.train_size << " test " << fr.test_size
            << " accuracy " << format_percent(fr.accuracy) << "\n";
    }
    out << "mean_accuracy " << format_percent(report.mean_accuracy) << "\n";
    out << "confusion rows=true cols=predicted\n";
    out << "labels";
    for (const auto& c : report.matrix.classes) out << " " << c;
    out << "\n";
    for (std::size_t i = 0; i < report.matrix.counts.size(); ++i) {
        out << report.matrix.classes[i];
        for (const long v : report.matrix.counts[i]) out << " " << v;
        out << "\n";
    }
}

void write_confusion_csv(std::ostream& out, const ConfusionMatrix& matrix) {
    out << "true\\predicted";
    for (const auto& c : matrix.classes) out << "," << c;
    out << "\n";
    for (std::size_t i = 0; i < matrix.counts.size(); ++i) {
        out << matrix.classes[i];
        for (const long v : matrix.counts[i]) out << "," << v;
        out << "\n";
    }
}

}  // namespace crip
