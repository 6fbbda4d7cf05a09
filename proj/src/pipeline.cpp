#include "sal/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "sal/checkpoint.hpp"
#include "sal/error.hpp"
#include "sal/metrics.hpp"
#include "sal/netpbm.hpp"
#include "sal/ops.hpp"

namespace fs = std::filesystem;

namespace sal {

namespace {

TensorPtr crop_map(const Tensor& map_nchw, int64_t h, int64_t w) {
    const int64_t pw = map_nchw.shape[3];
    auto out = Tensor::create({h, w});
    for (int64_t y = 0; y < h; ++y)
        std::copy_n(map_nchw.values.data() + y * pw, w, out->values.data() + y * w);
    return out;
}

std::vector<TensorPtr> forward_maps(const Model& model, const TensorPtr& image) {
    if (image->shape.size() != 3 || image->shape[0] != 3)
        throw std::invalid_argument("infer: expected a [3,H,W] image, got " +
                                    shape_str(image->shape));
    const int64_t h = image->shape[1], w = image->shape[2];
    auto padded = pad_to_multiple(*image, 8);
    auto x = Tensor::from({1, 3, padded->shape[1], padded->shape[2]}, padded->values);
    auto preds = model.forward(x);
    std::vector<TensorPtr> maps;
    maps.reserve(preds.size());
    for (const auto& p : preds) {
        auto up = bilinear_resize(logistic(p), padded->shape[1], padded->shape[2]);
        maps.push_back(crop_map(*up, h, w));
    }
    return maps;
}

}  // namespace

Model load_model(const TrainConfig& cfg, const std::vector<uint8_t>& ckpt) {
    cfg.validate();
    Rng rng(cfg.seed);
    Model model(cfg, rng);
    load_into_params(model.parameters(), load_checkpoint(ckpt));
    return model;
}

TensorPtr infer_map(const Model& model, const TensorPtr& image) {
    return forward_maps(model, image).back();
}

std::vector<TensorPtr> stepwise_maps(const Model& model, const TensorPtr& image) {
    return forward_maps(model, image);
}

namespace {

std::vector<std::string> list_pgm_ids(const std::string& dir) {
    if (!fs::is_directory(dir)) throw DataError("eval: not a directory: " + dir);
    std::vector<std::string> ids;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".pgm") ids.push_back(entry.path().stem().string());
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace

std::string evaluate_dirs(const std::string& pred_dir, const std::string& gt_dir) {
    const auto pred_ids = list_pgm_ids(pred_dir);
    const auto gt_ids = list_pgm_ids(gt_dir);
    if (pred_ids != gt_ids) {
        for (const auto& id : pred_ids)
            if (!std::binary_search(gt_ids.begin(), gt_ids.end(), id))
                throw DataError("eval: prediction '" + id + "' has no ground truth");
        for (const auto& id : gt_ids)
            if (!std::binary_search(pred_ids.begin(), pred_ids.end(), id))
                throw DataError("eval: ground truth '" + id + "' has no prediction");
    }
    if (pred_ids.empty()) throw DataError("eval: no .pgm maps under " + pred_dir);

    std::ostringstream os;
    os << "id\tmae\tmax_fbeta\n";
    char buf[96];
    double mae_sum = 0.0, fbeta_sum = 0.0;
    for (const auto& id : pred_ids) {
        auto pred = read_pgm(read_file((fs::path(pred_dir) / (id + ".pgm")).string()));
        auto gt = read_pgm(read_file((fs::path(gt_dir) / (id + ".pgm")).string()));
        if (pred->shape != gt->shape)
            throw DataError("eval: extent mismatch for id " + id);
        for (auto& v : gt->values) v = v > 0.5 ? 1.0 : 0.0;
        const auto report = evaluate_pair(*pred, *gt);
        mae_sum += report.mae;
        fbeta_sum += report.max_fbeta;
        std::snprintf(buf, sizeof(buf), "%s\t%.6f\t%.6f\n", id.c_str(), report.mae,
                      report.max_fbeta);
        os << buf;
    }
    const double n = static_cast<double>(pred_ids.size());
    std::snprintf(buf, sizeof(buf), "mean\t%.6f\t%.6f\n", mae_sum / n, fbeta_sum / n);
    os << buf;
    return os.str();
}

std::string stepwise_report(const Model& model, std::vector<Sample>& data) {
    if (data.empty()) throw DataError("stepwise: empty dataset");
    std::vector<double> mae_sum, fbeta_sum;
    for (auto& sample : data) {
        const auto maps = stepwise_maps(model, sample.image);
        if (mae_sum.empty()) {
            mae_sum.assign(maps.size(), 0.0);
            fbeta_sum.assign(maps.size(), 0.0);
        }
        for (size_t k = 0; k < maps.size(); ++k) {
            mae_sum[k] += mae(*maps[k], *sample.mask);
            fbeta_sum[k] += max_fbeta(*maps[k], *sample.mask);
        }
    }
    std::ostringstream os;
    os << "step\tmae\tmax_fbeta\n";
    char buf[96];
    const double n = static_cast<double>(data.size());
    for (size_t k = 0; k < mae_sum.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%zu\t%.6f\t%.6f\n", k, mae_sum[k] / n, fbeta_sum[k] / n);
        os << buf;
    }
    return os.str();
}

}  // namespace sal
