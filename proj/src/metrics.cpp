#include "sal/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace sal {

double mae(const Tensor& pred, const Tensor& gt) {
    if (pred.shape != gt.shape)
        throw std::invalid_argument("mae: shape mismatch " + shape_str(pred.shape) + " vs " +
                                    shape_str(gt.shape));
    double acc = 0.0;
    const size_t n = pred.values.size();
    for (size_t i = 0; i < n; ++i) acc += std::abs(pred.values[i] - gt.values[i]);
    return acc / static_cast<double>(n);
}

std::pair<double, double> pr_at_threshold(const Tensor& pred, const Tensor& gt, double tau) {
    if (pred.shape != gt.shape) throw std::invalid_argument("pr_at_threshold: shape mismatch");
    int64_t tp = 0, fp = 0, fn = 0;
    const size_t n = pred.values.size();
    for (size_t i = 0; i < n; ++i) {
        const bool p = pred.values[i] > tau;
        const bool g = gt.values[i] > 0.5;
        if (p && g) ++tp;
        else if (p) ++fp;
        else if (g) ++fn;
    }
    const double precision = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    const double recall = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    return {precision, recall};
}

static double fbeta(double precision, double recall, double beta2) {
    const double den = beta2 * precision + recall;
    return den > 0.0 ? (1.0 + beta2) * precision * recall / den : 0.0;
}

MetricReport evaluate_pair(const Tensor& pred, const Tensor& gt, double beta2, int thresholds) {
    MetricReport report;
    report.beta2 = beta2;
    report.mae = mae(pred, gt);
    report.precision.reserve(thresholds);
    report.recall.reserve(thresholds);
    double best = 0.0;
    for (int i = 0; i < thresholds; ++i) {
        const double tau = static_cast<double>(i) / static_cast<double>(thresholds);
        auto [p, r] = pr_at_threshold(pred, gt, tau);
        report.precision.push_back(p);
        report.recall.push_back(r);
        const double f = fbeta(p, r, beta2);
        if (f > best) best = f;
    }
    report.max_fbeta = best;
    return report;
}

double max_fbeta(const Tensor& pred, const Tensor& gt, double beta2, int thresholds) {
    double best = 0.0;
    for (int i = 0; i < thresholds; ++i) {
        const double tau = static_cast<double>(i) / static_cast<double>(thresholds);
        auto [p, r] = pr_at_threshold(pred, gt, tau);
        const double f = fbeta(p, r, beta2);
        if (f > best) best = f;
    }
    return best;
}

}  // namespace sal
