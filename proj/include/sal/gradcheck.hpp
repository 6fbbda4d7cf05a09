#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sal/tensor.hpp"

namespace sal {

/// Scalar-valued function of one tensor; rebuilt per evaluation so central
/// differences see fresh graphs.
using ScalarFn = std::function<TensorPtr(const TensorPtr&)>;

/// Central-difference check of the analytic gradient of f at x. Returns the
/// max relative error with denominator max(|analytic|, |numeric|, 1e-8).
double grad_check(const ScalarFn& f, const TensorPtr& x, double h);

struct GradCheckResult {
    std::string op;
    double max_error;
    bool passed;
};

/// Runs the built-in per-op check suite (three seeded instances per op, all
/// differentiable inputs). Empty op filter runs everything.
std::vector<GradCheckResult> run_gradcheck_suite(const std::string& op_filter, double h = 1e-5,
                                                 double tol = 1e-4);

std::vector<std::string> gradcheck_op_names();

}  // namespace sal
