#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sal/losses.hpp"
#include "sal/metrics.hpp"
#include "sal/ops.hpp"
#include "sal/rng.hpp"

using namespace sal;

namespace {

TensorPtr randt(Shape shape, Rng& rng, double lo, double hi) {
    auto t = Tensor::create(std::move(shape));
    for (auto& v : t->values) v = rng.uniform(lo, hi);
    return t;
}

}  // namespace

TEST_CASE("bce_loss: ln 2 at zero logit, saturation, naive-formula agreement") {
    CHECK(bce_loss(Tensor::scalar(0.0), Tensor::scalar(1.0))->item() ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(bce_loss(Tensor::scalar(100.0), Tensor::scalar(1.0))->item() ==
          doctest::Approx(0.0).epsilon(1e-12));

    Rng rng(3);
    auto logits = randt({4, 4}, rng, -3.0, 3.0);
    auto target = randt({4, 4}, rng, 0.0, 1.0);
    CHECK(bce_loss(logits, target)->item() ==
          doctest::Approx(oracle::bce_naive(logits->values, target->values)).epsilon(1e-10));
}

TEST_CASE("bce_loss: stable at magnitude-1e4 logits") {
    auto big = Tensor::from({2}, {1e4, -1e4});
    auto t = Tensor::from({2}, {0.0, 1.0});
    const double loss = bce_loss(big, t)->item();
    CHECK(std::isfinite(loss));
    CHECK(loss == doctest::Approx(1e4).epsilon(1e-12));  // both elements fully wrong
}

TEST_CASE("bce_loss: input validation") {
    CHECK_THROWS_AS(bce_loss(Tensor::zeros({2}), Tensor::zeros({3})), std::invalid_argument);
    CHECK_THROWS_AS(bce_loss(Tensor::zeros({2}), Tensor::from({2}, {0.5, 1.5})),
                    std::invalid_argument);
}

TEST_CASE("iou_loss: perfect, half, and disjoint overlap") {
    auto t = Tensor::from({4}, {1.0, 0.0, 1.0, 1.0});
    CHECK(iou_loss(t, t)->item() == doctest::Approx(0.0).epsilon(1e-6));

    auto half = Tensor::full({4}, 0.5);
    auto ones = Tensor::full({4}, 1.0);
    CHECK(iou_loss(half, ones)->item() == doctest::Approx(0.5).epsilon(1e-6));

    auto a = Tensor::from({4}, {1.0, 1.0, 0.0, 0.0});
    auto b = Tensor::from({4}, {0.0, 0.0, 1.0, 1.0});
    CHECK(iou_loss(a, b)->item() == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("iou_loss: bounded and monotone toward binary targets") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        auto target = Tensor::create({8});
        for (auto& v : target->values) v = rng.coin(0.5) ? 1.0 : 0.0;
        auto probs = randt({8}, rng, 0.0, 1.0);
        const double base = iou_loss(probs, target)->item();
        CHECK(base >= 0.0);
        CHECK(base <= 1.0);
        // shrink one coordinate's error; the loss may not increase
        const int64_t i = rng.below(8);
        auto closer = Tensor::from({8}, probs->values);
        closer->values[i] = 0.5 * (closer->values[i] + target->values[i]);
        CHECK(iou_loss(closer, target)->item() <= base + 1e-12);
    }
}

TEST_CASE("stage1_loss: collapses to bce at lambda2=0 and composes otherwise") {
    Rng rng(11);
    auto logits = randt({3, 3}, rng, -2.0, 2.0);
    auto target = randt({3, 3}, rng, 0.0, 1.0);

    LossConfig ce_only;
    ce_only.lambda2 = 0.0;
    CHECK(stage1_loss(logits, target, ce_only)->item() ==
          doctest::Approx(bce_loss(logits, target)->item()).epsilon(1e-15));

    LossConfig cfg;
    const double composed = cfg.lambda1 * bce_loss(logits, target)->item() +
                            cfg.lambda2 * iou_loss(logistic(logits), target)->item();
    CHECK(stage1_loss(logits, target, cfg)->item() == doctest::Approx(composed).epsilon(1e-12));

    auto saturated = Tensor::from({4}, {50.0, -50.0, 50.0, -50.0});
    auto binary = Tensor::from({4}, {1.0, 0.0, 1.0, 0.0});
    CHECK(stage1_loss(saturated, binary, cfg)->item() == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("recurrent_loss: unit cross-entropies give 1.9375 at N=4, k=2") {
    // logit -ln(e-1) against target 1 makes each CE term exactly 1
    const double logit = -std::log(std::exp(1.0) - 1.0);
    std::vector<TensorPtr> preds;
    for (int i = 0; i < 5; ++i) preds.push_back(Tensor::full({2, 2}, logit));
    auto target = Tensor::full({2, 2}, 1.0);
    CHECK(recurrent_loss(preds, target, 2.0)->item() ==
          doctest::Approx(1.9375).epsilon(1e-12));
}

TEST_CASE("recurrent_loss: k=1 reduces to the plain sum") {
    Rng rng(13);
    std::vector<TensorPtr> preds;
    for (int i = 0; i < 4; ++i) preds.push_back(randt({3}, rng, -2.0, 2.0));
    auto target = randt({3}, rng, 0.0, 1.0);
    double plain = 0.0;
    for (const auto& p : preds) plain += bce_loss(p, target)->item();
    CHECK(recurrent_loss(preds, target, 1.0)->item() == doctest::Approx(plain).epsilon(1e-12));
}

TEST_CASE("recurrent_loss: consecutive per-step gradient ratio equals k") {
    auto target = Tensor::full({4}, 1.0);
    std::vector<TensorPtr> preds;
    for (int i = 0; i < 5; ++i) {
        auto p = Tensor::full({4}, 0.3);
        p->set_trainable(true);
        preds.push_back(p);
    }
    backward(recurrent_loss(preds, target, 2.0));
    for (int i = 0; i + 1 < 5; ++i) {
        const double ratio = preds[i + 1]->grad[0] / preds[i]->grad[0];
        CHECK(std::abs(ratio - 2.0) < 1e-10);
    }
}

TEST_CASE("recurrent_loss: closed form for identical per-step errors") {
    Rng rng(17);
    for (double k : {1.0, 1.5, 2.0, 3.0}) {
        for (int64_t n_preds : {1, 3, 5, 6}) {
            auto shared = randt({3}, rng, -1.0, 1.0);
            auto target = randt({3}, rng, 0.0, 1.0);
            std::vector<TensorPtr> preds(n_preds, shared);
            const double ce = bce_loss(shared, target)->item();
            double weight_sum = 0.0;
            for (int64_t i = 0; i < n_preds; ++i) weight_sum += std::pow(k, double(i + 1));
            const double expect = ce * weight_sum / std::pow(k, double(n_preds));
            CHECK(recurrent_loss(preds, target, k)->item() ==
                  doctest::Approx(expect).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(recurrent_loss({}, Tensor::scalar(0.5), 2.0), std::invalid_argument);
}

TEST_CASE("mae: endpoints and loop oracle") {
    auto a = Tensor::from({2, 2}, {0.25, 0.5, 0.75, 1.0});
    CHECK(mae(*a, *a) == 0.0);
    CHECK(mae(*Tensor::full({3, 3}, 1.0), *Tensor::zeros({3, 3})) == 1.0);

    Rng rng(19);
    auto pred = randt({16, 16}, rng, 0.0, 1.0);
    auto gt = Tensor::create({16, 16});
    for (auto& v : gt->values) v = rng.coin(0.4) ? 1.0 : 0.0;
    CHECK(mae(*pred, *gt) == oracle::mae(pred->values, gt->values));
    CHECK_THROWS_AS(mae(*pred, *Tensor::zeros({4, 4})), std::invalid_argument);
}

TEST_CASE("pr_at_threshold: perfect, empty, and counting oracle") {
    Rng rng(23);
    auto gt = Tensor::create({8, 8});
    for (auto& v : gt->values) v = rng.coin(0.3) ? 1.0 : 0.0;
    auto [p_perfect, r_perfect] = pr_at_threshold(*gt, *gt, 0.5);
    CHECK(p_perfect == 1.0);
    CHECK(r_perfect == 1.0);

    auto zeros = Tensor::zeros({8, 8});
    auto [p0, r0] = pr_at_threshold(*zeros, *gt, 0.5);
    CHECK(p0 == 0.0);
    CHECK(r0 == 0.0);

    auto pred = randt({8, 8}, rng, 0.0, 1.0);
    auto [p, r] = pr_at_threshold(*pred, *gt, 0.5);
    const auto ref = oracle::pr_at(pred->values, gt->values, 0.5);
    CHECK(p == ref.precision);
    CHECK(r == ref.recall);
}

TEST_CASE("max_fbeta: perfect prediction scores 1") {
    Rng rng(29);
    auto gt = Tensor::create({6, 6});
    gt->values[7] = 1.0;
    gt->values[20] = 1.0;
    CHECK(max_fbeta(*gt, *gt) == 1.0);
}

TEST_CASE("max_fbeta: hand-evaluated P=0.8, R=0.5 case") {
    // 16 pixels: 8 positives in gt; prediction marks 4 of them plus 1 negative
    auto gt = Tensor::zeros({16});
    for (int i = 0; i < 8; ++i) gt->values[i] = 1.0;
    auto pred = Tensor::zeros({16});
    for (int i = 0; i < 4; ++i) pred->values[i] = 1.0;
    pred->values[10] = 1.0;
    auto [p, r] = pr_at_threshold(*pred, *gt, 0.5);
    CHECK(p == doctest::Approx(0.8));
    CHECK(r == doctest::Approx(0.5));
    const double expect = (1.0 + 0.3) * 0.8 * 0.5 / (0.3 * 0.8 + 0.5);
    CHECK(expect == doctest::Approx(0.70270).epsilon(1e-4));
    CHECK(max_fbeta(*pred, *gt) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("max_fbeta: sweep maximum dominates any single threshold") {
    Rng rng(31);
    auto gt = Tensor::create({8, 8});
    for (auto& v : gt->values) v = rng.coin(0.35) ? 1.0 : 0.0;
    auto pred = randt({8, 8}, rng, 0.0, 1.0);
    auto [p, r] = pr_at_threshold(*pred, *gt, 0.5);
    const double den = 0.3 * p + r;
    const double at_half = den > 0 ? 1.3 * p * r / den : 0.0;
    CHECK(max_fbeta(*pred, *gt) >= at_half);
}

TEST_CASE("metrics: 100 random 16x16 maps match brute force exactly") {
    Rng rng(37);
    for (int trial = 0; trial < 100; ++trial) {
        auto pred = randt({16, 16}, rng, 0.0, 1.0);
        auto gt = Tensor::create({16, 16});
        for (auto& v : gt->values) v = rng.coin(0.4) ? 1.0 : 0.0;
        CHECK(mae(*pred, *gt) == oracle::mae(pred->values, gt->values));
        CHECK(max_fbeta(*pred, *gt) == oracle::max_fbeta(pred->values, gt->values, 0.3, 256));
    }
}

TEST_CASE("evaluate_pair: report arrays have one entry per threshold") {
    Rng rng(41);
    auto pred = randt({8, 8}, rng, 0.0, 1.0);
    auto gt = Tensor::create({8, 8});
    for (auto& v : gt->values) v = rng.coin(0.5) ? 1.0 : 0.0;
    auto report = evaluate_pair(*pred, *gt);
    CHECK(report.precision.size() == 256);
    CHECK(report.recall.size() == 256);
    CHECK(report.mae >= 0.0);
    CHECK(report.mae <= 1.0);
    CHECK(report.max_fbeta >= 0.0);
    CHECK(report.max_fbeta <= 1.0);
}
