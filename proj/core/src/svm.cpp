#include "crip/svm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>

#include "crip/random.hpp"
#include "crip/text_format.hpp"

namespace crip {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void check_kernel(const std::string& kernel) {
    if (kernel != "linear") {
        throw std::invalid_argument("unsupported kernel '" + kernel +
                                    "' (only 'linear' is implemented)");
    }
}

}  // namespace

double BinarySvm::decision(std::span<const double> x) const {
    if (x.size() != weights.size()) {
        throw std::invalid_argument("feature dimension does not match the machine");
    }
    return dot(weights, x) + bias;
}

BinarySvm train_binary(const std::vector<std::vector<double>>& features,
                       const std::vector<int>& labels, const SvmTrainOptions& options) {
    check_kernel(options.kernel);
    if (!(options.c > 0.0)) throw std::invalid_argument("regularization C must be positive");
    if (features.size() != labels.size()) {
        throw std::invalid_argument("feature/label count mismatch");
    }
    if (features.empty()) throw std::invalid_argument("empty training set");
    const std::size_t n = features.size();
    const std::size_t d = features[0].size();
    bool has_pos = false;
    bool has_neg = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (features[i].size() != d) {
            throw std::invalid_argument("inconsistent feature dimensions in training set");
        }
        if (labels[i] == 1) {
            has_pos = true;
        } else if (labels[i] == -1) {
            has_neg = true;
        } else {
            throw std::invalid_argument("binary labels must be +1 or -1");
        }
    }
    if (!has_pos || !has_neg) {
        throw std::invalid_argument("training set must contain both classes");
    }

    // Dual coordinate descent with shrinking on the hinge-loss objective; the
    // bias rides as an augmented constant-1 feature, so each diagonal entry
    // is |x - mu|^2 + 1. Features are centered internally: it decorrelates
    // the bias column from the data and collapses the tail zigzag of the
    // coordinate sweeps. Convergence is declared when the projected-gradient
    // gap over a full (unshrunk) pass falls below the tolerance.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> mu(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) mu[j] += features[i][j];
    }
    for (double& m : mu) m /= static_cast<double>(n);
    const double mu_norm2 = dot(mu, mu);
    std::vector<double> x_dot_mu(n);
    std::vector<double> w(d, 0.0);
    double w_dot_mu = 0.0;
    double bias_w = 0.0;
    std::vector<double> alpha(n, 0.0);
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        x_dot_mu[i] = dot(features[i], mu);
        diag[i] = dot(features[i], features[i]) - 2.0 * x_dot_mu[i] + mu_norm2 + 1.0;
    }

    std::vector<std::size_t> active(n);
    std::iota(active.begin(), active.end(), std::size_t{0});
    std::mt19937_64 rng(options.seed);

    double gap_upper = inf;
    double gap_lower = -inf;
    bool converged = false;
    int pass = 0;
    while (pass < options.max_passes) {
        ++pass;
        deterministic_shuffle(active, rng);
        double pg_max = -inf;
        double pg_min = inf;
        for (std::size_t idx = 0; idx < active.size();) {
            const std::size_t i = active[idx];
            const double y = static_cast<double>(labels[i]);
            const double g = y * (dot(w, features[i]) - w_dot_mu + bias_w) - 1.0;
            double pg = 0.0;
            bool shrink = false;
            if (alpha[i] == 0.0) {
                if (g > gap_upper) {
                    shrink = true;
                } else {
                    pg = std::min(g, 0.0);
                }
            } else if (alpha[i] == options.c) {
                if (g < gap_lower) {
                    shrink = true;
                } else {
                    pg = std::max(g, 0.0);
                }
            } else {
                pg = g;
            }
            if (shrink) {
                active[idx] = active.back();
                active.pop_back();
                continue;
            }
            pg_max = std::max(pg_max, pg);
            pg_min = std::min(pg_min, pg);
            if (std::fabs(pg) > 1e-12) {
                const double old = alpha[i];
                alpha[i] = std::clamp(old - g / diag[i], 0.0, options.c);
                const double delta = (alpha[i] - old) * y;
                if (delta != 0.0) {
                    const auto& x = features[i];
                    for (std::size_t j = 0; j < d; ++j) w[j] += delta * (x[j] - mu[j]);
                    w_dot_mu += delta * (x_dot_mu[i] - mu_norm2);
                    bias_w += delta;
                }
            }
            ++idx;
        }
        if (pg_max - pg_min <= options.tolerance) {
            if (active.size() == n) {
                converged = true;
                break;
            }
            // confirm on the full index set before declaring convergence
            active.resize(n);
            std::iota(active.begin(), active.end(), std::size_t{0});
            gap_upper = inf;
            gap_lower = -inf;
        } else {
            gap_upper = pg_max <= 0.0 ? inf : pg_max;
            gap_lower = pg_min >= 0.0 ? -inf : pg_min;
        }
    }
    if (!converged) {
        std::cerr << "warning: svm dual optimization hit the pass cap (" << options.max_passes
                  << ") before reaching tolerance " << options.tolerance << "\n";
    }

    BinarySvm svm;
    // fold the centering back into the bias: w.(x - mu) + b == w.x + (b - w.mu)
    svm.bias = bias_w - dot(w, mu);
    svm.weights = std::move(w);
    svm.kernel = options.kernel;
    svm.c = options.c;
    svm.converged = converged;
    svm.passes = pass;
    return svm;
}

SvmModel train_multiclass(const std::vector<std::vector<double>>& features,
                          const std::vector<std::string>& labels,
                          const SvmTrainOptions& options, const FeatureMeta& meta,
                          std::vector<std::string> classes) {
    check_kernel(options.kernel);
    if (features.size() != labels.size()) {
        throw std::invalid_argument("feature/label count mismatch");
    }
    if (features.empty()) throw std::invalid_argument("empty training set");

    if (classes.empty()) {
        for (const auto& label : labels) {
            if (std::find(classes.begin(), classes.end(), label) == classes.end()) {
                classes.push_back(label);
            }
        }
    }
    if (classes.size() < 2) {
        throw std::invalid_argument("multiclass training needs at least 2 classes");
    }
    std::vector<std::vector<std::size_t>> members(classes.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto it = std::find(classes.begin(), classes.end(), labels[i]);
        if (it == classes.end()) {
            throw std::invalid_argument("label '" + labels[i] + "' missing from class list");
        }
        members[static_cast<std::size_t>(it - classes.begin())].push_back(i);
    }
    for (std::size_t k = 0; k < classes.size(); ++k) {
        if (members[k].empty()) {
            throw std::invalid_argument("class '" + classes[k] + "' has no training samples");
        }
    }

    SvmModel model;
    model.classes = classes;
    model.feature_dim = features[0].size();
    model.meta = meta;
    model.kernel = options.kernel;
    model.c = options.c;
    for (std::size_t a = 0; a < classes.size(); ++a) {
        for (std::size_t b = a + 1; b < classes.size(); ++b) {
            std::vector<std::vector<double>> pair_features;
            std::vector<int> pair_labels;
            pair_features.reserve(members[a].size() + members[b].size());
            for (std::size_t i = 0; i < labels.size(); ++i) {
                if (labels[i] == classes[a]) {
                    pair_features.push_back(features[i]);
                    pair_labels.push_back(1);
                } else if (labels[i] == classes[b]) {
                    pair_features.push_back(features[i]);
                    pair_labels.push_back(-1);
                }
            }
            BinarySvm machine = train_binary(pair_features, pair_labels, options);
            machine.positive_label = classes[a];
            machine.negative_label = classes[b];
            model.machines.push_back(std::move(machine));
        }
    }
    return model;
}

std::string predict(const SvmModel& model, std::span<const double> x) {
    if (x.size() != model.feature_dim) {
        throw std::invalid_argument("feature dimension does not match the model");
    }
    std::vector<int> votes(model.classes.size(), 0);
    std::vector<double> margins(model.classes.size(), 0.0);
    const auto class_index = [&](const std::string& label) {
        return static_cast<std::size_t>(
            std::find(model.classes.begin(), model.classes.end(), label) -
            model.classes.begin());
    };
    for (const auto& machine : model.machines) {
        const double d = machine.decision(x);
        const std::size_t winner =
            d >= 0.0 ? class_index(machine.positive_label) : class_index(machine.negative_label);
        ++votes[winner];
        margins[winner] += std::fabs(d);
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < model.classes.size(); ++k) {
        if (votes[k] > votes[best] ||
            (votes[k] == votes[best] && margins[k] > margins[best])) {
            best = k;
        }
    }
    return model.classes[best];
}

void save_model(const SvmModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open file for writing");
    out << "crip-model 1\n";
    out << "kernel " << model.kernel << "\n";
    out << "c " << format_double(model.c) << "\n";
    out << "feature_dim " << model.feature_dim << "\n";
    out << "block_size " << model.meta.block_size << "\n";
    out << "bins " << model.meta.bins << "\n";
    out << "normalize " << (model.meta.normalize ? 1 : 0) << "\n";
    out << "classes " << model.classes.size() << "\n";
    for (const auto& c : model.classes) out << c << "\n";
    out << "machines " << model.machines.size() << "\n";
    for (const auto& m : model.machines) {
        out << "machine " << m.positive_label << " " << m.negative_label << "\n";
        out << "bias " << format_double(m.bias) << "\n";
        out << "weights";
        for (const double w : m.weights) out << " " << format_double(w);
        out << "\n";
    }
    if (!out) throw std::runtime_error(path + ": write failed");
}

namespace {

std::string expect_line(std::istream& in, const std::string& path) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": truncated model file");
    return line;
}

std::string expect_field(std::istream& in, const std::string& path, const std::string& key) {
    std::istringstream ls(expect_line(in, path));
    std::string k;
    std::string value;
    ls >> k;
    if (k != key) throw std::runtime_error(path + ": expected '" + key + "', got '" + k + "'");
    ls >> value;
    return value;
}

}  // namespace

SvmModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open model file");
    if (expect_line(in, path) != "crip-model 1") {
        throw std::runtime_error(path + ": unrecognized model format/version");
    }
    SvmModel model;
    model.kernel = expect_field(in, path, "kernel");
    check_kernel(model.kernel);
    model.c = std::stod(expect_field(in, path, "c"));
    model.feature_dim = std::stoul(expect_field(in, path, "feature_dim"));
    model.meta.block_size = std::stoi(expect_field(in, path, "block_size"));
    model.meta.bins = std::stoi(expect_field(in, path, "bins"));
    model.meta.normalize = expect_field(in, path, "normalize") == "1";
    const std::size_t n_classes = std::stoul(expect_field(in, path, "classes"));
    if (n_classes < 2) throw std::runtime_error(path + ": model needs at least 2 classes");
    for (std::size_t i = 0; i < n_classes; ++i) {
        model.classes.push_back(expect_line(in, path));
    }
    const std::size_t n_machines = std::stoul(expect_field(in, path, "machines"));
    if (n_machines != n_classes * (n_classes - 1) / 2) {
        throw std::runtime_error(path + ": machine count does not match the class count");
    }
    for (std::size_t i = 0; i < n_machines; ++i) {
        BinarySvm m;
        {
            std::istringstream ls(expect_line(in, path));
            std::string tag;
            ls >> tag >> m.positive_label >> m.negative_label;
            if (tag != "machine" || m.positive_label.empty() || m.negative_label.empty()) {
                throw std::runtime_error(path + ": malformed machine header");
            }
        }
        m.bias = std::stod(expect_field(in, path, "bias"));
        {
            std::istringstream ls(expect_line(in, path));
            std::string tag;
            ls >> tag;
            if (tag != "weights") throw std::runtime_error(path + ": malformed weights row");
            double v;
            while (ls >> v) m.weights.push_back(v);
        }
        if (m.weights.size() != model.feature_dim) {
            throw std::runtime_error(path + ": weight vector length mismatch");
        }
        m.kernel = model.kernel;
        m.c = model.c;
        model.machines.push_back(std::move(m));
    }
    return model;
}

}  // namespace crip
