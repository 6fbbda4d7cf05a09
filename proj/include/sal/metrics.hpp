#pragma once

#include <utility>
#include <vector>

#include "sal/tensor.hpp"

namespace sal {

/// Mean absolute per-pixel error between a prediction in [0,1] and a binary
/// ground truth of the same shape.
double mae(const Tensor& pred, const Tensor& gt);

/// Precision/recall after binarizing pred at > tau; empty denominators give 0.
std::pair<double, double> pr_at_threshold(const Tensor& pred, const Tensor& gt, double tau);

struct MetricReport {
    double mae = 0.0;
    double max_fbeta = 0.0;
    std::vector<double> precision;  // one entry per threshold
    std::vector<double> recall;
    double beta2 = 0.3;
};

/// Max F-beta over `thresholds` evenly spaced cut points i/thresholds in
/// [0,1); F = (1+b2)PR / (b2 P + R), 0 when the denominator vanishes.
double max_fbeta(const Tensor& pred, const Tensor& gt, double beta2 = 0.3, int thresholds = 256);

MetricReport evaluate_pair(const Tensor& pred, const Tensor& gt, double beta2 = 0.3,
                           int thresholds = 256);

}  // namespace sal
