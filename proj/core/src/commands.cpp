#include "crip/commands.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include "crip/descriptor.hpp"
#include "crip/evaluate.hpp"
#include "crip/featurize.hpp"
#include "crip/image_io.hpp"
#include "crip/manifest.hpp"
#include "crip/preprocess.hpp"
#include "crip/random.hpp"
#include "crip/robustness.hpp"
#include "crip/text_format.hpp"

namespace crip {

namespace {

namespace fs = std::filesystem;

void write_config_echo(const fs::path& dir, const RunConfig& config,
                       const std::string& command) {
    std::ofstream out(dir / "config.txt");
    if (!out) throw std::runtime_error((dir / "config.txt").string() + ": cannot write");
    out << "command " << command << "\n";
    out << "manifest " << config.manifest_path << "\n";
    out << "descriptor " << config.descriptor << "\n";
    out << "image_size " << config.image_size << "\n";
    out << "block_size " << config.block_size << "\n";
    out << "normalize " << (config.normalize ? 1 : 0) << "\n";
    out << "kernel " << config.kernel << "\n";
    out << "c " << format_double(config.c) << "\n";
    out << "protocol " << config.protocol << "\n";
    out << "k " << config.k << "\n";
    out << "repeats " << config.repeats << "\n";
    out << "ratio " << format_double(config.ratio) << "\n";
    out << "seed " << config.seed << "\n";
    out << "out " << config.out_dir << "\n";
    if (!config.class_filter.empty()) {
        out << "classes";
        for (const auto& c : config.class_filter) out << " " << c;
        out << "\n";
    }
    if (!config.perturb_kind.empty()) {
        out << "perturb " << config.perturb_kind << "\n";
        const auto list = [&out](const char* key, const auto& values) {
            if (values.empty()) return;
            out << key;
            for (const auto v : values) out << " " << format_double(static_cast<double>(v));
            out << "\n";
        };
        list("gain", config.gains);
        list("offset", config.offsets);
        list("sigma", config.sigmas);
        list("factor", config.factors);
    }
}

DatasetManifest load_filtered_manifest(const RunConfig& config) {
    DatasetManifest manifest = load_manifest(config.manifest_path);
    if (!config.class_filter.empty()) {
        manifest = filter_by_labels(manifest, config.class_filter);
    }
    return manifest;
}

PipelineConfig pipeline_config(const RunConfig& config) {
    PipelineConfig pc;
    pc.descriptor = config.descriptor;
    pc.image_size = config.image_size;
    pc.block_size = config.block_size;
    pc.normalize = config.normalize;
    pc.kernel = config.kernel;
    pc.c = config.c;
    pc.seed = config.seed;
    return pc;
}

CodeMap compute_map(const GrayImage& image, const std::string& descriptor) {
    return descriptor == "crip" ? crip_map(image) : lbp_map(image);
}

fs::path prepare_out_dir(const RunConfig& config, const std::string& command) {
    const fs::path dir(config.out_dir);
    fs::create_directories(dir);
    write_config_echo(dir, config, command);
    return dir;
}

std::string map_file_name(std::size_t index, const std::string& descriptor) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "map_%05zu_%s.pgm", index, descriptor.c_str());
    return buf;
}

}  // namespace

int cmd_extract(const RunConfig& config, std::ostream& log, std::ostream& err) {
    try {
        const DatasetManifest manifest = load_filtered_manifest(config);
        const fs::path dir = prepare_out_dir(config, "extract");
        const BlockGrid grid =
            BlockGrid::for_map(config.image_size, config.image_size, config.block_size);

        std::ofstream out(dir / "features.csv");
        if (!out) throw std::runtime_error((dir / "features.csv").string() + ": cannot write");
        FeatureMatrixWriter writer(out, config.block_size, grid.block_count(), config.normalize);

        if (config.save_maps) fs::create_directories(dir / "maps");

        int failures = 0;
        for (std::size_t i = 0; i < manifest.samples.size(); ++i) {
            const Sample& sample = manifest.samples[i];
            try {
                const GrayImage raw = load_image(sample.image_path);
                const GrayImage img = preprocess(raw, sample.bbox, config.image_size);
                const CodeMap map = compute_map(img, config.descriptor);
                writer.write_row(sample.image_path, feature_vector(map, config.block_size,
                                                                   config.normalize));
                if (config.save_maps) {
                    save_pgm(map, (dir / "maps" / map_file_name(i, config.descriptor)).string());
                }
            } catch (const std::exception& e) {
                err << "warning: " << sample.image_path << ": " << e.what() << "\n";
                ++failures;
            }
        }
        log << "extract: wrote " << writer.rows_written() << " rows of dimension "
            << grid.block_count() * kCodeBins << " to " << (dir / "features.csv").string()
            << "\n";
        if (failures > 0) {
            log << "extract: " << failures << " sample(s) failed\n";
            return 1;
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

int cmd_eval(const RunConfig& config, std::ostream& log, std::ostream& err) {
    try {
        const DatasetManifest manifest = load_filtered_manifest(config);
        const fs::path dir = prepare_out_dir(config, "eval");

        SplitPlan plan;
        if (config.protocol == "pd") {
            plan = split_person_dependent(manifest, config.ratio, config.repeats, config.seed);
        } else if (config.protocol == "kfold") {
            plan = split_subject_kfold(manifest, config.k, config.seed);
        } else if (config.protocol == "loso") {
            plan = split_loso(manifest);
        } else {
            throw std::invalid_argument("protocol must be pd, kfold or loso");
        }

        const EvalReport report = run_protocol(manifest, pipeline_config(config), plan);

        {
            std::ofstream out(dir / "report.txt");
            if (!out) throw std::runtime_error((dir / "report.txt").string() + ": cannot write");
            write_report(out, report);
        }
        {
            std::ofstream out(dir / "confusion.csv");
            if (!out) throw std::runtime_error((dir / "confusion.csv").string() +
                                               ": cannot write");
            write_confusion_csv(out, report.matrix);
        }
        log << "eval: protocol " << report.protocol << ", " << report.folds.size()
            << " folds, mean accuracy " << format_percent(report.mean_accuracy) << "%\n";
        return report.plan_compliant ? 0 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

int cmd_perturb(const RunConfig& config, std::ostream& log, std::ostream& err) {
    try {
        const DatasetManifest manifest = load_filtered_manifest(config);
        const fs::path dir = prepare_out_dir(config, "perturb");
        const auto levels = expand_levels(config.perturb_kind, config.gains, config.offsets,
                                          config.sigmas, config.factors);

        std::ofstream drift_out(dir / "drift.csv");
        if (!drift_out) throw std::runtime_error((dir / "drift.csv").string() + ": cannot write");
        drift_out << "sample,perturbation,crip_drift,lbp_drift\n";

        std::vector<double> crip_sums(levels.size(), 0.0);
        std::vector<double> lbp_sums(levels.size(), 0.0);
        int measured = 0;
        int failures = 0;
        for (std::size_t i = 0; i < manifest.samples.size(); ++i) {
            const Sample& sample = manifest.samples[i];
            try {
                const GrayImage raw = load_image(sample.image_path);
                const GrayImage img = preprocess(raw, sample.bbox, config.image_size);
                const CodeMap crip_base = crip_map(img);
                const CodeMap lbp_base = lbp_map(img);
                for (std::size_t li = 0; li < levels.size(); ++li) {
                    const std::uint64_t noise_seed =
                        derive_seed(config.seed, (i << 16) ^ li);
                    const GrayImage perturbed = apply_perturbation(img, levels[li], noise_seed);
                    const double cd = hamming_drift(crip_base, crip_map(perturbed));
                    const double ld = hamming_drift(lbp_base, lbp_map(perturbed));
                    crip_sums[li] += cd;
                    lbp_sums[li] += ld;
                    drift_out << sample.image_path << "," << levels[li].describe() << ","
                              << format_double(cd) << "," << format_double(ld) << "\n";
                }
                ++measured;
            } catch (const std::exception& e) {
                err << "warning: " << sample.image_path << ": " << e.what() << "\n";
                ++failures;
            }
        }
        if (measured == 0) throw std::runtime_error("no sample could be measured");

        std::ofstream summary(dir / "summary.csv");
        if (!summary) throw std::runtime_error((dir / "summary.csv").string() + ": cannot write");
        summary << "perturbation,descriptor,mean_drift\n";
        for (std::size_t li = 0; li < levels.size(); ++li) {
            summary << levels[li].describe() << ",crip,"
                    << format_double(crip_sums[li] / measured) << "\n";
            summary << levels[li].describe() << ",lbp,"
                    << format_double(lbp_sums[li] / measured) << "\n";
        }
        log << "perturb: " << levels.size() << " level(s) over " << measured << " sample(s)\n";
        return failures > 0 ? 1 : 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace crip
