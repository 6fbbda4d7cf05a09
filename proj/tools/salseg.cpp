#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sal/checkpoint.hpp"
#include "sal/config.hpp"
#include "sal/dataset.hpp"
#include "sal/error.hpp"
#include "sal/gradcheck.hpp"
#include "sal/netpbm.hpp"
#include "sal/pipeline.hpp"
#include "sal/synth.hpp"
#include "sal/train.hpp"

namespace {

void write_text(const std::string& path, const std::string& text) {
    sal::write_file(path, std::vector<uint8_t>(text.begin(), text.end()));
}

int run_synth(uint64_t seed, int64_t count, int64_t size, const std::string& out_dir) {
    sal::SynthConfig cfg;
    cfg.seed = seed;
    cfg.count = count;
    cfg.size = size;
    auto samples = sal::synth_generate(cfg);
    sal::write_dataset(out_dir, samples);
    std::printf("wrote %zu samples to %s\n", samples.size(), out_dir.c_str());
    return 0;
}

int run_train(int stage, const std::string& data_dir, const std::string& config_path,
              const std::string& ckpt_in, const std::string& ckpt_out,
              const std::string& log_path) {
    sal::TrainConfig cfg;
    if (!config_path.empty()) cfg = sal::load_config_file(config_path);
    auto data = sal::load_dataset(data_dir);

    sal::StageResult result;
    if (stage == 1) {
        result = sal::train_stage1(data, cfg);
    } else {
        if (ckpt_in.empty()) throw sal::DataError("train: stages 2 and 3 need --ckpt-in");
        const auto ckpt = sal::read_file(ckpt_in);
        result = stage == 2 ? sal::train_stage2(data, cfg, ckpt)
                            : sal::train_stage3(data, cfg, ckpt);
    }
    sal::write_file(ckpt_out, result.checkpoint);
    if (!log_path.empty()) write_text(log_path, result.log.to_text());
    std::printf("stage %d done, best validation MAE %.6f, checkpoint at %s\n", stage,
                result.best_val_mae, ckpt_out.c_str());
    return 0;
}

int run_infer(const std::string& ckpt_path, const std::string& in_path,
              const std::string& out_path, const std::string& config_path) {
    sal::TrainConfig cfg;
    if (!config_path.empty()) cfg = sal::load_config_file(config_path);
    auto model = sal::load_model(cfg, sal::read_file(ckpt_path));
    auto image = sal::read_ppm(sal::read_file(in_path));
    auto map = sal::infer_map(model, image);
    sal::write_file(out_path, sal::write_pgm(*map));
    return 0;
}

int run_eval(const std::string& pred_dir, const std::string& gt_dir, const std::string& out_path) {
    const std::string report = sal::evaluate_dirs(pred_dir, gt_dir);
    if (out_path.empty()) {
        std::fputs(report.c_str(), stdout);
    } else {
        write_text(out_path, report);
    }
    return 0;
}

int run_stepwise(const std::string& ckpt_path, const std::string& data_dir,
                 const std::string& out_path, const std::string& config_path) {
    sal::TrainConfig cfg;
    if (!config_path.empty()) cfg = sal::load_config_file(config_path);
    auto model = sal::load_model(cfg, sal::read_file(ckpt_path));
    auto data = sal::load_dataset(data_dir);
    const std::string table = sal::stepwise_report(model, data);
    if (out_path.empty()) {
        std::fputs(table.c_str(), stdout);
    } else {
        write_text(out_path, table);
    }
    return 0;
}

int run_gradcheck(const std::string& op) {
    const auto results = sal::run_gradcheck_suite(op);
    bool all_ok = true;
    for (const auto& r : results) {
        std::printf("%-16s max rel error %.3e  %s\n", r.op.c_str(), r.max_error,
                    r.passed ? "PASS" : "FAIL");
        all_ok = all_ok && r.passed;
    }
    if (!all_ok) throw sal::NumericError("gradcheck failed");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Recurrent-attention salient object segmentation"};
    app.require_subcommand(1);

    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
    uint64_t seed = 1;
    int64_t count = 200, size = 64;
    std::string out_dir;
    synth->add_option("--seed", seed, "Generator seed");
    synth->add_option("--count", count, "Sample count");
    synth->add_option("--size", size, "Image size in pixels");
    synth->add_option("--out", out_dir, "Output dataset directory")->required();

    auto* train = app.add_subcommand("train", "Run one training stage");
    int stage = 1;
    std::string data_dir, config_path, ckpt_in, ckpt_out, log_path;
    train->add_option("--stage", stage, "Stage 1, 2, or 3")->required()->check(CLI::Range(1, 3));
    train->add_option("--data", data_dir, "Dataset directory")->required();
    train->add_option("--config", config_path, "Config file (key = value)");
    train->add_option("--ckpt-in", ckpt_in, "Input checkpoint (stages 2 and 3)");
    train->add_option("--ckpt-out", ckpt_out, "Output checkpoint")->required();
    train->add_option("--log", log_path, "Per-epoch run log");

    auto* infer = app.add_subcommand("infer", "Predict a saliency map");
    std::string infer_ckpt, infer_in, infer_out, infer_config;
    infer->add_option("--ckpt", infer_ckpt, "Model checkpoint")->required();
    infer->add_option("--in", infer_in, "Input image (.ppm)")->required();
    infer->add_option("--out", infer_out, "Output map (.pgm)")->required();
    infer->add_option("--config", infer_config, "Config file matching the checkpoint");

    auto* eval = app.add_subcommand("eval", "Score prediction maps against ground truth");
    std::string pred_dir, gt_dir, eval_out;
    eval->add_option("--pred", pred_dir, "Directory of predicted .pgm maps")->required();
    eval->add_option("--gt", gt_dir, "Directory of ground-truth .pgm masks")->required();
    eval->add_option("--out", eval_out, "Report path (stdout when omitted)");

    auto* stepwise = app.add_subcommand("stepwise", "Per-step MAE/F-beta table");
    std::string sw_ckpt, sw_data, sw_out, sw_config;
    stepwise->add_option("--ckpt", sw_ckpt, "Model checkpoint")->required();
    stepwise->add_option("--data", sw_data, "Dataset directory")->required();
    stepwise->add_option("--out", sw_out, "Table path (stdout when omitted)");
    stepwise->add_option("--config", sw_config, "Config file matching the checkpoint");

    auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference gradient checks");
    std::string op;
    gradcheck->add_option("--op", op, "Check a single op by name");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (synth->parsed()) return run_synth(seed, count, size, out_dir);
        if (train->parsed()) return run_train(stage, data_dir, config_path, ckpt_in, ckpt_out, log_path);
        if (infer->parsed()) return run_infer(infer_ckpt, infer_in, infer_out, infer_config);
        if (eval->parsed()) return run_eval(pred_dir, gt_dir, eval_out);
        if (stepwise->parsed()) return run_stepwise(sw_ckpt, sw_data, sw_out, sw_config);
        if (gradcheck->parsed()) return run_gradcheck(op);
    } catch (const sal::NumericError& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 3;
    } catch (const sal::DataError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}
