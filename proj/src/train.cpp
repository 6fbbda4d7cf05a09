#include "sal/train.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "sal/checkpoint.hpp"
#include "sal/error.hpp"
#include "sal/losses.hpp"
#include "sal/metrics.hpp"
#include "sal/ops.hpp"
#include "sal/optim.hpp"
#include "sal/pipeline.hpp"

namespace sal {

namespace {

constexpr uint64_t kSplitSalt = 0x51A7F00D5EEDULL;

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

class Snapshot {
public:
    explicit Snapshot(const std::vector<NamedTensor>& params) : params_(params) { capture(); }

    void capture() {
        values_.clear();
        for (const auto& p : params_) values_.push_back(p.tensor->values);
    }

    void restore() {
        for (size_t i = 0; i < params_.size(); ++i) params_[i].tensor->values = values_[i];
    }

private:
    std::vector<NamedTensor> params_;
    std::vector<std::vector<double>> values_;
};

// Halve the learning rates when validation MAE fails to improve by min_delta
// for `patience` consecutive epochs.
struct PlateauDecay {
    double best = std::numeric_limits<double>::infinity();
    int64_t bad = 0;

    void observe(double val, AdamOptimizer& opt, const TrainConfig& cfg) {
        if (val < best - cfg.lr_min_delta) {
            best = val;
            bad = 0;
            return;
        }
        if (++bad >= cfg.lr_patience) {
            opt.scale_lr(cfg.lr_decay_factor);
            bad = 0;
        }
    }
};

void check_finite(double loss) {
    if (!std::isfinite(loss)) throw NumericError("training: non-finite loss");
}

TensorPtr sample_image_batch1(const Sample& s) {
    return Tensor::from({1, 3, s.image->shape[1], s.image->shape[2]}, s.image->values);
}

TensorPtr sample_target_small(Sample& s) {
    const auto& m = mask_small_of(s);
    return Tensor::from({1, 1, m->shape[0], m->shape[1]}, m->values);
}

double validate_stage1(const Stage1Model& model, std::vector<Sample>& data,
                       const std::vector<size_t>& idx) {
    double acc = 0.0;
    for (size_t i : idx) {
        auto logits = model.forward(sample_image_batch1(data[i]));
        auto up = bilinear_resize(logistic(logits), data[i].image->shape[1],
                                  data[i].image->shape[2]);
        acc += mae(*reshape(up, {up->shape[2], up->shape[3]}), *data[i].mask);
    }
    return acc / static_cast<double>(idx.size());
}

}  // namespace

SplitIdx split_train_val(size_t n, const TrainConfig& cfg) {
    if (n < 2) throw DataError("train: dataset needs at least 2 samples");
    Rng rng(cfg.seed ^ kSplitSalt);
    std::vector<size_t> perm(n);
    for (size_t i = 0; i < n; ++i) perm[i] = i;
    for (size_t i = n - 1; i > 0; --i) {
        const size_t j = static_cast<size_t>(rng.below(static_cast<int64_t>(i) + 1));
        std::swap(perm[i], perm[j]);
    }
    const size_t val_n = std::min(static_cast<size_t>(cfg.val_count), n / 2);
    SplitIdx split;
    split.train.assign(perm.begin(), perm.end() - static_cast<ptrdiff_t>(val_n));
    split.val.assign(perm.end() - static_cast<ptrdiff_t>(val_n), perm.end());
    return split;
}

std::string RunLog::to_text() const {
    std::ostringstream os;
    os << "epoch\ttrain_loss\tval_mae\tlrs\tseconds\n";
    char buf[128];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof(buf), "%lld\t%.9g\t%.9g\t", static_cast<long long>(row.epoch),
                      row.train_loss, row.val_mae);
        os << buf;
        for (size_t i = 0; i < row.lrs.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%s%.9g", i ? "," : "", row.lrs[i]);
            os << buf;
        }
        std::snprintf(buf, sizeof(buf), "\t%.3f\n", row.seconds);
        os << buf;
    }
    return os.str();
}

StageResult train_stage1(std::vector<Sample>& data, const TrainConfig& cfg) {
    cfg.validate();
    const auto split = split_train_val(data.size(), cfg);
    Rng rng(cfg.seed);
    Stage1Model model(cfg, rng);
    auto params = model.parameters();
    set_trainable_all(params, true);

    AdamOptimizer opt;
    opt.add_group(params, cfg.stage1_lr);
    LossConfig lc{cfg.lambda1, cfg.lambda2, cfg.k, cfg.smoothing};

    Snapshot best(params);
    double best_val = validate_stage1(model, data, split.val);
    PlateauDecay plateau;

    StageResult result;
    for (int64_t epoch = 1; epoch <= cfg.stage1_epochs; ++epoch) {
        const double t0 = now_seconds();
        double loss_sum = 0.0;
        int64_t batch_count = 0;
        for (const auto& batch : batch_iter(split.train.size(), cfg.stage1_batch, rng, true)) {
            std::vector<size_t> idx;
            idx.reserve(batch.size());
            for (size_t b : batch) idx.push_back(split.train[b]);
            auto images = stack_images(data, idx);
            auto targets = stack_masks_small(data, idx);
            auto loss = stage1_loss(model.forward(images), targets, lc);
            check_finite(loss->item());
            opt.zero_grad();
            backward(loss);
            opt.step();
            loss_sum += loss->item();
            ++batch_count;
        }
        const double val = validate_stage1(model, data, split.val);
        if (val < best_val) {
            best_val = val;
            best.capture();
        }
        plateau.observe(val, opt, cfg);
        result.log.rows.push_back({epoch, loss_sum / static_cast<double>(batch_count), val,
                                   opt.group_lrs(), now_seconds() - t0});
    }
    best.restore();
    result.checkpoint = save_checkpoint(params);
    result.best_val_mae = best_val;
    return result;
}

double validate_model(const Model& model, std::vector<Sample>& data,
                      const std::vector<size_t>& idx) {
    double acc = 0.0;
    for (size_t i : idx) {
        auto map = infer_map(model, data[i].image);
        acc += mae(*map, *data[i].mask);
    }
    return acc / static_cast<double>(idx.size());
}

namespace {

StageResult train_recurrent(std::vector<Sample>& data, const TrainConfig& cfg,
                            const std::vector<uint8_t>& ckpt, bool end_to_end) {
    cfg.validate();
    const auto split = split_train_val(data.size(), cfg);
    Rng rng(cfg.seed);
    Model model(cfg, rng);
    const auto records = load_checkpoint(ckpt);
    if (end_to_end) {
        load_into_params(model.parameters(), records);
    } else {
        load_into_params(model.spm_parameters(), records);
    }

    const auto pgm_params = model.pgm_parameters();
    const auto ram_params = model.ram_parameters();
    const auto spm_params = model.spm_parameters();
    set_trainable_all(pgm_params, true);
    set_trainable_all(ram_params, true);
    set_trainable_all(spm_params, end_to_end);

    AdamOptimizer opt;
    opt.add_group(pgm_params, cfg.stage2_lr_pgm);
    opt.add_group(ram_params, cfg.stage2_lr_ram);
    if (end_to_end) opt.add_group(spm_params, cfg.stage3_lr_spm);

    const auto all_params = model.parameters();
    Snapshot best(all_params);
    double best_val = validate_model(model, data, split.val);
    PlateauDecay plateau;

    const int64_t epochs = end_to_end ? cfg.stage3_epochs : cfg.stage2_epochs;
    StageResult result;
    for (int64_t epoch = 1; epoch <= epochs; ++epoch) {
        const double t0 = now_seconds();
        double loss_sum = 0.0;
        int64_t batch_count = 0;
        for (const auto& batch : batch_iter(split.train.size(), cfg.stage2_batch, rng, true)) {
            TensorPtr loss;
            for (size_t b : batch) {
                Sample& s = data[split.train[b]];
                auto preds = model.forward(sample_image_batch1(s));
                auto term = recurrent_loss(preds, sample_target_small(s), cfg.k);
                loss = loss ? add(loss, term) : term;
            }
            if (batch.size() > 1) loss = scale(loss, 1.0 / static_cast<double>(batch.size()));
            check_finite(loss->item());
            opt.zero_grad();
            backward(loss);
            opt.step();
            loss_sum += loss->item();
            ++batch_count;
        }
        const double val = validate_model(model, data, split.val);
        if (val < best_val) {
            best_val = val;
            best.capture();
        }
        plateau.observe(val, opt, cfg);
        result.log.rows.push_back({epoch, loss_sum / static_cast<double>(batch_count), val,
                                   opt.group_lrs(), now_seconds() - t0});
    }
    best.restore();
    result.checkpoint = save_checkpoint(all_params);
    result.best_val_mae = best_val;
    return result;
}

}  // namespace

StageResult train_stage2(std::vector<Sample>& data, const TrainConfig& cfg,
                         const std::vector<uint8_t>& spm_ckpt) {
    return train_recurrent(data, cfg, spm_ckpt, false);
}

StageResult train_stage3(std::vector<Sample>& data, const TrainConfig& cfg,
                         const std::vector<uint8_t>& full_ckpt) {
    return train_recurrent(data, cfg, full_ckpt, true);
}

}  // namespace sal
