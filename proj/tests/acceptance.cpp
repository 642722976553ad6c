// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// required criterion fails. The FER2013 check is conditional on the public
// dataset being available and reports without failing the run.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "crip/commands.hpp"
#include "crip/descriptor.hpp"
#include "crip/evaluate.hpp"
#include "crip/featurize.hpp"
#include "crip/fer2013.hpp"
#include "crip/perturb.hpp"
#include "crip/random.hpp"
#include "crip/svm.hpp"
#include "testutil.hpp"

using namespace crip;
namespace fs = std::filesystem;

namespace {

enum class Outcome { kPass, kFail, kSkip };

struct Runner {
    int failures = 0;

    void run(int id, const std::string& name,
             const std::function<std::pair<Outcome, std::string>()>& body) {
        Outcome outcome = Outcome::kFail;
        std::string detail;
        try {
            std::tie(outcome, detail) = body();
        } catch (const std::exception& e) {
            outcome = Outcome::kFail;
            detail = std::string("exception: ") + e.what();
        }
        const char* tag = outcome == Outcome::kPass ? "PASS"
                          : outcome == Outcome::kFail ? "FAIL"
                                                      : "SKIP";
        std::cout << "[" << tag << "] criterion " << id << ": " << name;
        if (!detail.empty()) std::cout << " (" << detail << ")";
        std::cout << std::endl;
        if (outcome == Outcome::kFail) ++failures;
    }
};

std::pair<Outcome, std::string> pass(const std::string& detail = "") {
    return {Outcome::kPass, detail};
}

std::pair<Outcome, std::string> fail(const std::string& detail) {
    return {Outcome::kFail, detail};
}

double elapsed_seconds(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string find_fer2013_csv() {
    if (const char* env = std::getenv("FER2013_CSV")) {
        if (fs::exists(env)) return env;
    }
    for (const char* candidate : {"data/fer2013.csv", "../data/fer2013.csv", "fer2013.csv"}) {
        if (fs::exists(candidate)) return candidate;
    }
    return "";
}

}  // namespace

int main() {
    Runner runner;

    runner.run(1, "optimized code map equals the naive per-pixel oracle", [] {
        const auto start = std::chrono::steady_clock::now();
        std::mt19937_64 rng(1001);
        for (int trial = 0; trial < 100; ++trial) {
            const GrayImage img = testutil::random_image(64, 64, rng);
            if (!(crip_map(img) == crip_map_reference(img))) {
                return fail("mismatch on seeded image " + std::to_string(trial));
            }
        }
        const double secs = elapsed_seconds(start);
        if (secs >= 10.0) return fail("took " + std::to_string(secs) + " s (limit 10)");
        return pass("100 images, " + std::to_string(secs) + " s");
    });

    runner.run(2, "code maps are bit-identical under affine illumination changes", [] {
        std::mt19937_64 rng(1002);
        for (int i = 0; i < 50; ++i) {
            const GrayImage img = testutil::random_image(64, 64, rng);
            const CodeMap base = crip_map(img);
            for (int j = 0; j < 20; ++j) {
                const double gain = testutil::random_dyadic_gain(rng);
                const double offset = testutil::random_dyadic_offset(rng);
                if (!(crip_map(perturb_affine(img, gain, offset)) == base)) {
                    return fail("drift at gain " + std::to_string(gain) + ", offset " +
                                std::to_string(offset));
                }
            }
        }
        return pass("50 images x 20 transforms");
    });

    runner.run(3, "constant fixpoint and hand-checked codes", [] {
        for (const double value : {0.0, 19.0, 127.5, 255.0}) {
            const CodeMap map = crip_map(GrayImage(32, 32, value));
            for (const auto code : map.codes()) {
                if (code != 255) return fail("constant image code != 255");
            }
        }
        Neighborhood nbh;
        nbh.center = 10.0;
        nbh.ring1.fill(20.0);
        nbh.ring2.fill(40.0);
        if (crip_code(nbh) != 255) return fail("bright outer ring should code 255");
        nbh.ring2.fill(0.0);
        if (crip_code(nbh) != 0) return fail("dark outer ring should code 0");
        return pass();
    });

    runner.run(4, "single-pixel changes stay within the outer radius", [] {
        std::mt19937_64 rng(1004);
        for (int trial = 0; trial < 50; ++trial) {
            GrayImage img = testutil::random_image(48, 48, rng);
            const CodeMap before = crip_map(img);
            const int pr = static_cast<int>(rng() % 48);
            const int pc = static_cast<int>(rng() % 48);
            const double old = img.at(pr, pc);
            double replacement = static_cast<double>(rng() % 256);
            if (replacement == old) replacement = old + 1.0;
            img.at(pr, pc) = replacement;
            const CodeMap after = crip_map(img);
            for (int r = 0; r < 48; ++r) {
                for (int c = 0; c < 48; ++c) {
                    if (std::max(std::abs(r - pr), std::abs(c - pc)) > 2 &&
                        before.at(r, c) != after.at(r, c)) {
                        return fail("code changed outside the 5x5 patch");
                    }
                }
            }
        }
        return pass("50 images");
    });

    runner.run(5, "feature vectors conserve mass and dimension", [] {
        std::mt19937_64 rng(1005);
        for (int trial = 0; trial < 50; ++trial) {
            const int w = 20 + static_cast<int>(rng() % 120);
            const int h = 20 + static_cast<int>(rng() % 120);
            const CodeMap map = testutil::random_codemap(w, h, rng);
            for (const int b : {8, 16, 32}) {
                const FeatureVector fv = feature_vector(map, b, false);
                const int blocks = ((h + b - 1) / b) * ((w + b - 1) / b);
                if (fv.dimension() != static_cast<std::size_t>(blocks) * 256) {
                    return fail("dimension mismatch");
                }
                double sum = 0.0;
                for (const double v : fv.values) sum += v;
                if (sum != static_cast<double>(w) * h) return fail("mass not conserved");
            }
        }
        return pass("50 maps x 3 block sizes");
    });

    runner.run(6, "one-against-one classifier sanity", [] {
        for (int n = 2; n <= 7; ++n) {
            std::vector<std::vector<double>> xs;
            std::vector<std::string> ys;
            for (int k = 0; k < n; ++k) {
                for (int i = 0; i < 4; ++i) {
                    xs.push_back({6.0 * k + 0.2 * i, 6.0 * k - 0.2 * i});
                    ys.push_back("c" + std::to_string(k));
                }
            }
            const SvmModel model = train_multiclass(xs, ys, {});
            if (model.machines.size() != static_cast<std::size_t>(n * (n - 1) / 2)) {
                return fail("machine count wrong for n=" + std::to_string(n));
            }
        }

        // separable 3-class blobs: unit sigma, centers 8 sigma apart
        const auto blobs = testutil::make_blobs({{0, 0}, {8, 0}, {0, 8}}, 200, 1.0, 1006);
        const SvmModel model = train_multiclass(blobs.features, blobs.labels, {});
        std::size_t correct = 0;
        for (std::size_t i = 0; i < blobs.features.size(); ++i) {
            if (predict(model, blobs.features[i]) == blobs.labels[i]) ++correct;
        }
        if (correct != blobs.features.size()) {
            return fail("training accuracy below 100%");
        }

        std::vector<Sample> samples;
        for (std::size_t i = 0; i < blobs.features.size(); ++i) {
            Sample s;
            s.image_path = "blob" + std::to_string(i);
            s.subject_id = "s" + std::to_string(i);
            s.label = blobs.labels[i];
            samples.push_back(s);
        }
        const DatasetManifest m = make_manifest(std::move(samples));
        PipelineConfig config;
        config.seed = 1006;
        const EvalReport report =
            evaluate_features(blobs.features, blobs.labels, {}, m.classes,
                              split_person_dependent(m, 0.8, 5, 1006), config);
        if (report.mean_accuracy < 99.0) {
            return fail("pd accuracy " + std::to_string(report.mean_accuracy) + " < 99");
        }
        return pass("21 machines at n=7; pd accuracy " +
                    std::to_string(report.mean_accuracy));
    });

    runner.run(7, "end-to-end texture pipeline meets the protocol floors", [] {
        const auto start = std::chrono::steady_clock::now();
        testutil::TempDir dir("acceptance_e2e");
        testutil::TextureDatasetParams params;
        params.classes = 3;
        params.subjects = 12;
        params.samples_per_subject_class = 6;
        params.image_size = 64;
        params.seed = 1007;
        const std::string manifest_path = testutil::write_texture_dataset(dir.path(), params);
        const DatasetManifest manifest = load_manifest(manifest_path);

        PipelineConfig config;
        config.image_size = 64;
        config.block_size = 16;
        config.seed = 1007;

        const SplitPlan pd_plan = split_person_dependent(manifest, 0.8, 5, 1007);
        const EvalReport pd = run_protocol(manifest, config, pd_plan);
        if (pd.mean_accuracy < 90.0) {
            return fail("pd mean " + std::to_string(pd.mean_accuracy) + " < 90");
        }
        const EvalReport pd_again = run_protocol(manifest, config, pd_plan);
        std::ostringstream a;
        std::ostringstream b;
        write_report(a, pd);
        write_report(b, pd_again);
        if (a.str() != b.str()) return fail("pd report not deterministic");

        const EvalReport loso = run_protocol(manifest, config, split_loso(manifest));
        if (loso.mean_accuracy < 80.0) {
            return fail("loso mean " + std::to_string(loso.mean_accuracy) + " < 80");
        }
        const double secs = elapsed_seconds(start);
        if (secs >= 120.0) return fail("took " + std::to_string(secs) + " s (limit 120)");
        return pass("pd " + std::to_string(pd.mean_accuracy) + "%, loso " +
                    std::to_string(loso.mean_accuracy) + "%, " + std::to_string(secs) + " s");
    });

    runner.run(8, "split plans stay leak-free across 1000 seeds per protocol", [] {
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            const DatasetManifest m = testutil::random_manifest(seed);
            const std::size_t n = m.samples.size();

            const SplitPlan pd = split_person_dependent(m, 0.8, 2, seed);
            const long target = std::lround(0.2 * static_cast<double>(n));
            for (const Fold& fold : pd.folds) {
                if (std::llabs(static_cast<long>(fold.test.size()) - target) > 1) {
                    return fail("pd test size off by more than 1 at seed " +
                                std::to_string(seed));
                }
                if (fold.train.size() + fold.test.size() != n) {
                    return fail("pd fold is not a partition");
                }
            }

            const SplitPlan kf = split_subject_kfold(m, 10, seed);
            for (const Fold& fold : kf.folds) {
                std::set<std::string> train_subjects;
                for (const int i : fold.train) train_subjects.insert(m.samples[i].subject_id);
                for (const int i : fold.test) {
                    if (train_subjects.count(m.samples[i].subject_id)) {
                        return fail("kfold subject leakage at seed " + std::to_string(seed));
                    }
                }
            }

            const SplitPlan loso = split_loso(m);
            if (loso.folds.size() != m.subjects.size()) return fail("loso fold count");
            for (const Fold& fold : loso.folds) {
                std::set<std::string> train_subjects;
                for (const int i : fold.train) train_subjects.insert(m.samples[i].subject_id);
                for (const int i : fold.test) {
                    if (train_subjects.count(m.samples[i].subject_id)) {
                        return fail("loso subject leakage at seed " + std::to_string(seed));
                    }
                }
            }
        }
        return pass("3000 plans checked");
    });

    runner.run(9, "repeated eval runs are byte-identical", [] {
        testutil::TempDir dir("acceptance_det");
        testutil::TextureDatasetParams params;
        params.subjects = 5;
        params.samples_per_subject_class = 2;
        params.image_size = 32;
        params.seed = 1009;
        const std::string manifest_path = testutil::write_texture_dataset(dir.path(), params);

        RunConfig cfg;
        cfg.command = "eval";
        cfg.manifest_path = manifest_path;
        cfg.image_size = 32;
        cfg.block_size = 8;
        cfg.protocol = "pd";
        cfg.repeats = 3;
        cfg.seed = 1009;

        std::ostringstream log;
        std::ostringstream err;
        cfg.out_dir = dir.path() + "/run_a";
        if (cmd_eval(cfg, log, err) != 0) return fail("first run failed: " + err.str());
        cfg.out_dir = dir.path() + "/run_b";
        if (cmd_eval(cfg, log, err) != 0) return fail("second run failed: " + err.str());
        for (const char* file : {"report.txt", "confusion.csv"}) {
            if (testutil::slurp(dir.path() + "/run_a/" + file) !=
                testutil::slurp(dir.path() + "/run_b/" + file)) {
                return fail(std::string(file) + " differs between runs");
            }
        }
        return pass();
    });

    runner.run(10, "FER2013 public-test accuracy lands near the reference row", [] {
        const std::string csv = find_fer2013_csv();
        if (csv.empty()) {
            return std::pair{Outcome::kSkip,
                             std::string("fer2013.csv not present; set FER2013_CSV to run")};
        }
        std::vector<std::vector<double>> train_x;
        std::vector<std::string> train_y;
        std::vector<std::vector<double>> test_x;
        std::vector<std::string> test_y;
        for_each_fer2013_row(csv, [&](int emotion, const std::string& usage,
                                      const GrayImage& img) {
            if (emotion == 6) return;  // 6-class runs drop the neutral label
            if (usage != "Training" && usage != "PublicTest") return;
            FeatureVector fv = feature_vector(crip_map(img), 16, false);
            if (usage == "Training") {
                train_x.push_back(std::move(fv.values));
                train_y.push_back(fer2013_label(emotion));
            } else {
                test_x.push_back(std::move(fv.values));
                test_y.push_back(fer2013_label(emotion));
            }
        });
        SvmTrainOptions options;
        options.seed = 1010;
        const SvmModel model = train_multiclass(train_x, train_y, options);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < test_x.size(); ++i) {
            if (predict(model, test_x[i]) == test_y[i]) ++correct;
        }
        const double acc = 100.0 * static_cast<double>(correct) /
                           static_cast<double>(test_x.size());
        const double reference = 51.8;
        std::ostringstream detail;
        detail << "6-class public accuracy " << acc << "%, reference " << reference
               << "% +/- 5";
        // reported, never failed: hyperparameters in the source row are unknown
        if (std::fabs(acc - reference) <= 5.0) return pass(detail.str() + "; consistent");
        return std::pair{Outcome::kSkip, detail.str() + "; outside the band, reported only"};
    });

    std::cout << (runner.failures == 0 ? "acceptance: all required criteria passed"
                                       : "acceptance: FAILURES PRESENT")
              << std::endl;
    return runner.failures;
}
