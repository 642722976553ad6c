// Batch command-line front end: extract features, evaluate protocols, and
// measure descriptor robustness under perturbation sweeps.

#include <CLI11.hpp>

#include <iostream>

#include "crip/commands.hpp"

namespace {

void add_common_flags(CLI::App* cmd, crip::RunConfig& cfg) {
    cmd->add_option("--manifest", cfg.manifest_path,
                    "dataset manifest (path,subject,label[,x,y,w,h])")
        ->required();
    cmd->add_option("--descriptor", cfg.descriptor, "code descriptor")
        ->check(CLI::IsMember({"crip", "lbp"}))
        ->capture_default_str();
    cmd->add_option("--size", cfg.image_size, "normalized square image size")
        ->check(CLI::Range(5, 4096))
        ->capture_default_str();
    cmd->add_option("--block", cfg.block_size, "histogram block side")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_flag("--normalize", cfg.normalize, "L1-normalize each block histogram");
    cmd->add_option("--seed", cfg.seed, "seed for every stochastic step")
        ->capture_default_str();
    cmd->add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--classes", cfg.class_filter,
                    "restrict to these labels (e.g. 6- vs 7-class runs)")
        ->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cross-Centroid Ripple Pattern feature extraction and evaluation"};
    app.require_subcommand(1);

    crip::RunConfig cfg;

    CLI::App* extract = app.add_subcommand("extract", "write the feature matrix for a manifest");
    add_common_flags(extract, cfg);
    extract->add_flag("--save-maps", cfg.save_maps, "also export per-sample code maps as PGM");

    CLI::App* eval = app.add_subcommand("eval", "run a cross-validation protocol");
    add_common_flags(eval, cfg);
    eval->add_option("--kernel", cfg.kernel, "SVM kernel")
        ->check(CLI::IsMember({"linear"}))
        ->capture_default_str();
    eval->add_option("--c", cfg.c, "SVM regularization C")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    eval->add_option("--protocol", cfg.protocol, "validation protocol")
        ->check(CLI::IsMember({"pd", "kfold", "loso"}))
        ->capture_default_str();
    eval->add_option("--k", cfg.k, "fold count for the subject k-fold protocol")
        ->check(CLI::Range(2, 1000))
        ->capture_default_str();
    eval->add_option("--repeats", cfg.repeats, "repeat count for the person-dependent protocol")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    eval->add_option("--ratio", cfg.ratio, "train fraction for the person-dependent protocol")
        ->check(CLI::Range(0.01, 0.99))
        ->capture_default_str();

    CLI::App* perturb = app.add_subcommand("perturb", "measure code-map drift under perturbations");
    add_common_flags(perturb, cfg);
    perturb->add_option("--perturb", cfg.perturb_kind, "perturbation kind")
        ->check(CLI::IsMember({"affine", "noise", "resolution"}))
        ->required();
    perturb->add_option("--gain", cfg.gains, "affine gain sweep values");
    perturb->add_option("--offset", cfg.offsets, "affine offset sweep values");
    perturb->add_option("--sigma", cfg.sigmas, "noise sigma sweep values");
    perturb->add_option("--factor", cfg.factors, "resolution factor sweep values");

    CLI11_PARSE(app, argc, argv);

    if (extract->parsed()) {
        cfg.command = "extract";
        return crip::cmd_extract(cfg, std::cout, std::cerr);
    }
    if (eval->parsed()) {
        cfg.command = "eval";
        return crip::cmd_eval(cfg, std::cout, std::cerr);
    }
    cfg.command = "perturb";
    return crip::cmd_perturb(cfg, std::cout, std::cerr);
}
