#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "crip/evaluate.hpp"
#include "crip/random.hpp"
#include "testutil.hpp"

using namespace crip;

namespace {

DatasetManifest uniform_manifest(int n_subjects, int samples_per_subject,
                                 const std::vector<std::string>& labels) {
    std::vector<Sample> samples;
    int i = 0;
    for (int s = 0; s < n_subjects; ++s) {
        for (int k = 0; k < samples_per_subject; ++k) {
            Sample sample;
            sample.image_path = "img" + std::to_string(i);
            sample.subject_id = "subj" + std::to_string(s);
            sample.label = labels[static_cast<std::size_t>(i) % labels.size()];
            samples.push_back(sample);
            ++i;
        }
    }
    return make_manifest(std::move(samples));
}

void check_fold_partition(const Fold& fold, std::size_t n) {
    std::set<int> seen(fold.train.begin(), fold.train.end());
    for (const int i : fold.test) {
        CHECK(seen.insert(i).second);  // no overlap
    }
    CHECK(seen.size() == n);
}

std::string serialize(const EvalReport& report) {
    std::ostringstream os;
    write_report(os, report);
    return os.str();
}

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("person-dependent splits hit the 80:20 ratio") {
    const DatasetManifest m = uniform_manifest(10, 10, {"a", "b"});
    const SplitPlan plan = split_person_dependent(m, 0.8, 5, 42);
    CHECK(plan.protocol == "pd");
    CHECK(plan.folds.size() == 5);
    for (const Fold& fold : plan.folds) {
        CHECK(fold.train.size() == 80);
        CHECK(fold.test.size() == 20);
        check_fold_partition(fold, 100);
    }
}

TEST_CASE("person-dependent splits are deterministic and seed-sensitive") {
    const DatasetManifest m = uniform_manifest(6, 5, {"a", "b", "c"});
    const SplitPlan p1 = split_person_dependent(m, 0.8, 5, 9);
    const SplitPlan p2 = split_person_dependent(m, 0.8, 5, 9);
    const SplitPlan p3 = split_person_dependent(m, 0.8, 5, 10);
    for (std::size_t f = 0; f < p1.folds.size(); ++f) {
        CHECK(p1.folds[f].train == p2.folds[f].train);
        CHECK(p1.folds[f].test == p2.folds[f].test);
    }
    bool any_difference = false;
    for (std::size_t f = 0; f < p1.folds.size(); ++f) {
        if (p1.folds[f].test != p3.folds[f].test) any_difference = true;
    }
    CHECK(any_difference);
}

TEST_CASE("stratification gives one test sample per class on a balanced ten") {
    const DatasetManifest m = uniform_manifest(5, 2, {"a", "b"});
    REQUIRE(m.samples.size() == 10);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const SplitPlan plan = split_person_dependent(m, 0.8, 5, seed);
        for (const Fold& fold : plan.folds) {
            REQUIRE(fold.test.size() == 2);
            std::set<std::string> labels;
            for (const int i : fold.test) labels.insert(m.samples[i].label);
            CHECK(labels.size() == 2);
        }
    }
}

TEST_CASE("person-dependent split rejects tiny inputs") {
    const DatasetManifest m = uniform_manifest(2, 2, {"a"});
    CHECK_THROWS_AS(split_person_dependent(m, 0.8, 5, 0), std::invalid_argument);
    const DatasetManifest ok = uniform_manifest(5, 2, {"a", "b"});
    CHECK_THROWS_AS(split_person_dependent(ok, 1.5, 5, 0), std::invalid_argument);
    CHECK_THROWS_AS(split_person_dependent(ok, 0.8, 0, 0), std::invalid_argument);
}

TEST_CASE("subject k-fold partitions subjects") {
    const DatasetManifest m = uniform_manifest(30, 4, {"a", "b"});
    const SplitPlan plan = split_subject_kfold(m, 10, 3);
    CHECK(plan.protocol == "kfold");
    CHECK(plan.folds.size() == 10);
    std::set<std::string> tested_subjects;
    for (const Fold& fold : plan.folds) {
        check_fold_partition(fold, m.samples.size());
        std::set<std::string> train_subjects;
        std::set<std::string> test_subjects;
        for (const int i : fold.train) train_subjects.insert(m.samples[i].subject_id);
        for (const int i : fold.test) test_subjects.insert(m.samples[i].subject_id);
        CHECK(test_subjects.size() == 3);
        for (const auto& s : test_subjects) {
            CHECK(train_subjects.count(s) == 0);
            tested_subjects.insert(s);
        }
    }
    CHECK(tested_subjects.size() == 30);
}

TEST_CASE("subject k-fold spreads the remainder") {
    const DatasetManifest m = uniform_manifest(11, 2, {"a", "b"});
    const SplitPlan plan = split_subject_kfold(m, 10, 0);
    std::multiset<std::size_t> sizes;
    for (const Fold& fold : plan.folds) {
        std::set<std::string> test_subjects;
        for (const int i : fold.test) test_subjects.insert(m.samples[i].subject_id);
        sizes.insert(test_subjects.size());
    }
    CHECK(sizes == std::multiset<std::size_t>{2, 1, 1, 1, 1, 1, 1, 1, 1, 1});
}

TEST_CASE("subject k-fold needs enough subjects") {
    const DatasetManifest m = uniform_manifest(9, 2, {"a", "b"});
    CHECK_THROWS_AS(split_subject_kfold(m, 10, 0), std::invalid_argument);
    CHECK_THROWS_AS(split_subject_kfold(m, 1, 0), std::invalid_argument);
}

TEST_CASE("loso tests every subject exactly once") {
    const DatasetManifest m = uniform_manifest(7, 3, {"a", "b", "c"});
    const SplitPlan plan = split_loso(m);
    CHECK(plan.protocol == "loso");
    CHECK(plan.folds.size() == 7);
    std::vector<int> tested;
    for (const Fold& fold : plan.folds) {
        check_fold_partition(fold, m.samples.size());
        std::set<std::string> test_subjects;
        for (const int i : fold.test) {
            test_subjects.insert(m.samples[i].subject_id);
            tested.push_back(i);
        }
        CHECK(test_subjects.size() == 1);
    }
    std::sort(tested.begin(), tested.end());
    std::vector<int> all(m.samples.size());
    std::iota(all.begin(), all.end(), 0);
    CHECK(tested == all);

    const DatasetManifest single = uniform_manifest(1, 6, {"a", "b"});
    CHECK_THROWS_AS(split_loso(single), std::invalid_argument);
    const DatasetManifest pair = uniform_manifest(2, 3, {"a", "b"});
    CHECK(split_loso(pair).folds.size() == 2);
    // one fold per subject at study scale too
    const DatasetManifest large = uniform_manifest(86, 2, {"a", "b"});
    CHECK(split_loso(large).folds.size() == 86);
}

TEST_CASE("accuracy arithmetic") {
    CHECK(accuracy({"a", "b"}, {"a", "b"}) == 100.0);
    CHECK(accuracy({"a", "b"}, {"b", "a"}) == 0.0);
    CHECK(accuracy({"a", "a", "a", "b"}, {"a", "a", "a", "a"}) == 75.0);
    CHECK_THROWS_AS(accuracy({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(accuracy({"a"}, {"a", "b"}), std::invalid_argument);
}

TEST_CASE("confusion matrix counting") {
    const std::vector<std::string> classes = {"a", "b", "c"};
    const ConfusionMatrix perfect = confusion({"a", "b", "c"}, {"a", "b", "c"}, classes);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(perfect.counts[i][j] == (i == j ? 1 : 0));
        }
    }
    const ConfusionMatrix off = confusion({"b"}, {"a"}, classes);
    CHECK(off.counts[0][1] == 1);
    CHECK(off.total() == 1);
    CHECK(off.trace() == 0);
    CHECK_THROWS_AS(confusion({"zz"}, {"a"}, classes), std::invalid_argument);
}

TEST_CASE("confusion trace matches accuracy on random data") {
    std::mt19937_64 rng(51);
    const std::vector<std::string> classes = {"a", "b", "c", "d"};
    std::vector<std::string> truths;
    std::vector<std::string> preds;
    for (int i = 0; i < 50; ++i) {
        truths.push_back(classes[rng() % 4]);
        preds.push_back(classes[rng() % 4]);
    }
    const ConfusionMatrix m = confusion(preds, truths, classes);
    CHECK(100.0 * static_cast<double>(m.trace()) / static_cast<double>(m.total()) ==
          accuracy(preds, truths));
    long row_total = 0;
    for (const auto& row : m.counts) {
        for (const long v : row) row_total += v;
    }
    CHECK(row_total == 50);
}

TEST_CASE("evaluate_features runs folds and aggregates") {
    const auto blobs = testutil::make_blobs({{0, 0}, {8, 0}, {0, 8}}, 40, 1.0, 8);
    std::vector<std::string> subjects;
    for (std::size_t i = 0; i < blobs.features.size(); ++i) {
        subjects.push_back("s" + std::to_string(i % 12));
    }
    std::vector<Sample> samples;
    for (std::size_t i = 0; i < blobs.features.size(); ++i) {
        Sample s;
        s.image_path = "x" + std::to_string(i);
        s.subject_id = subjects[i];
        s.label = blobs.labels[i];
        samples.push_back(s);
    }
    const DatasetManifest m = make_manifest(std::move(samples));
    const SplitPlan plan = split_person_dependent(m, 0.8, 5, 77);
    PipelineConfig config;
    config.seed = 77;
    const EvalReport report =
        evaluate_features(blobs.features, blobs.labels, subjects, m.classes, plan, config);
    CHECK(report.folds.size() == 5);
    CHECK(report.plan_compliant);
    CHECK(report.matrix.total() == 5 * 24);
    double mean = 0.0;
    for (const auto& f : report.folds) mean += f.accuracy;
    mean /= 5.0;
    CHECK(std::fabs(mean - report.mean_accuracy) < 1e-9);
    CHECK(report.mean_accuracy > 99.0);

    // identical inputs give byte-identical reports
    const EvalReport again =
        evaluate_features(blobs.features, blobs.labels, subjects, m.classes, plan, config);
    CHECK(serialize(report) == serialize(again));
}

TEST_CASE("degenerate train-equals-test plans are flagged") {
    const auto blobs = testutil::make_blobs({{0, 0}, {8, 0}}, 20, 1.0, 9);
    std::vector<std::string> subjects(blobs.features.size(), "s0");
    SplitPlan plan;
    plan.protocol = "custom";
    Fold fold;
    for (int i = 0; i < static_cast<int>(blobs.features.size()); ++i) {
        fold.train.push_back(i);
        fold.test.push_back(i);
    }
    plan.folds.push_back(fold);
    PipelineConfig config;
    const EvalReport report = evaluate_features(blobs.features, blobs.labels, subjects,
                                                {"class0", "class1"}, plan, config);
    CHECK_FALSE(report.plan_compliant);
    REQUIRE(report.notes.size() == 1);
    CHECK(report.notes[0].find("non-compliant") != std::string::npos);
    // train == test means the fold accuracy is the training accuracy
    CHECK(report.folds[0].accuracy == 100.0);
}

TEST_CASE("subject leakage in a subject-based plan is an error") {
    const auto blobs = testutil::make_blobs({{0, 0}, {8, 0}}, 20, 1.0, 10);
    std::vector<std::string> subjects;
    std::vector<Sample> samples;
    for (std::size_t i = 0; i < blobs.features.size(); ++i) {
        Sample s;
        s.image_path = "x" + std::to_string(i);
        s.subject_id = "s" + std::to_string(i % 5);
        s.label = blobs.labels[i];
        subjects.push_back(s.subject_id);
        samples.push_back(s);
    }
    const DatasetManifest m = make_manifest(std::move(samples));
    SplitPlan plan = split_loso(m);
    // corrupt fold 0: move one of its test samples into train as well
    plan.folds[0].train.push_back(plan.folds[0].test[0]);
    PipelineConfig config;
    CHECK_THROWS_WITH_AS(
        evaluate_features(blobs.features, blobs.labels, subjects, m.classes, plan, config),
        doctest::Contains("subject leakage"), std::runtime_error);
}

TEST_CASE("evaluate_features validates plan shape") {
    const auto blobs = testutil::make_blobs({{0, 0}, {8, 0}}, 5, 1.0, 11);
    std::vector<std::string> subjects(blobs.features.size(), "s0");
    PipelineConfig config;
    SplitPlan empty;
    empty.protocol = "pd";
    CHECK_THROWS_AS(evaluate_features(blobs.features, blobs.labels, subjects,
                                      {"class0", "class1"}, empty, config),
                    std::invalid_argument);
    SplitPlan bad;
    bad.protocol = "pd";
    Fold fold;
    fold.train = {0, 1, 2};
    fold.test = {99};
    bad.folds.push_back(fold);
    CHECK_THROWS_WITH_AS(evaluate_features(blobs.features, blobs.labels, subjects,
                                           {"class0", "class1"}, bad, config),
                         doctest::Contains("fold 0"), std::runtime_error);
}

TEST_CASE("report serialization carries config, folds and the matrix") {
    const auto blobs = testutil::make_blobs({{0, 0}, {8, 0}}, 10, 1.0, 12);
    std::vector<std::string> subjects(blobs.features.size(), "");
    for (std::size_t i = 0; i < subjects.size(); ++i) subjects[i] = "s" + std::to_string(i % 4);
    std::vector<Sample> samples;
    for (std::size_t i = 0; i < blobs.features.size(); ++i) {
        Sample s;
        s.image_path = "x";
        s.subject_id = subjects[i];
        s.label = blobs.labels[i];
        samples.push_back(s);
    }
    const DatasetManifest m = make_manifest(std::move(samples));
    PipelineConfig config;
    config.descriptor = "lbp";
    config.seed = 5;
    const EvalReport report = evaluate_features(blobs.features, blobs.labels, subjects,
                                                m.classes, split_person_dependent(m, 0.8, 2, 5),
                                                config);
    const std::string text = serialize(report);
    CHECK(text.find("crip-eval-report 1\n") == 0);
    CHECK(text.find("protocol pd\n") != std::string::npos);
    CHECK(text.find("descriptor lbp\n") != std::string::npos);
    CHECK(text.find("folds 2\n") != std::string::npos);
    CHECK(text.find("mean_accuracy ") != std::string::npos);
    CHECK(text.find("confusion rows=true cols=predicted\n") != std::string::npos);

    std::ostringstream csv;
    write_confusion_csv(csv, report.matrix);
    CHECK(csv.str().find("true\\predicted,class0,class1\n") == 0);
}

TEST_CASE("full pipeline on a written texture dataset") {
    testutil::TempDir tmp("protocol");
    testutil::TextureDatasetParams params;
    params.subjects = 6;
    params.samples_per_subject_class = 3;
    params.image_size = 32;
    const std::string manifest_path = testutil::write_texture_dataset(tmp.path(), params);
    const DatasetManifest m = load_manifest(manifest_path);
    CHECK(m.samples.size() == 6 * 3 * 3);

    PipelineConfig config;
    config.image_size = 32;
    config.block_size = 8;
    config.seed = 3;
    const SplitPlan plan = split_person_dependent(m, 0.8, 3, 3);
    const EvalReport report = run_protocol(m, config, plan);
    CHECK(report.mean_accuracy >= 80.0);
    CHECK(report.matrix.classes.size() == 3);

    // determinism across repeated runs
    const EvalReport again = run_protocol(m, config, plan);
    CHECK(serialize(report) == serialize(again));
}

}  // TEST_SUITE
