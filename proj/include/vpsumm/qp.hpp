#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <vector>

#include "vpsumm/error.hpp"
#include "vpsumm/variance.hpp"

namespace vpsumm {

// Euclidean projection onto { z : sum(z) = s, 0 <= z <= 1 }. The threshold
// is found by bisection on a sorted copy of v, so the result is invariant
// under permutation of the input. Requires 0 < s <= dim(v).
Eigen::VectorXd project_capped_simplex(const Eigen::VectorXd& v, double s);

// Upper bound on the largest eigenvalue of a symmetric PSD operator via
// seeded power iteration, inflated by `safety`. Never returns below `floor`.
double lipschitz_estimate(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                          Eigen::Index dim, int iters = 50, double safety = 1.1,
                          std::uint64_t seed = 0, double floor = 1e-12);

enum class StepRule {
  kFixedFromLipschitz,  // constant step 1/L, L from the power-iteration bound
  kBacktracking,        // adaptive L: halved after success, doubled on ascent
};

struct QpOptions {
  int max_iters = 2000;
  double grad_map_tol = 1e-6;  // on the infinity norm of z - proj(z - step * grad)
  double obj_rel_tol = 1e-8;   // on relative objective decrease
  StepRule step_rule = StepRule::kFixedFromLipschitz;
  int power_iters = 50;
  double power_safety = 1.1;
  std::uint64_t seed = 0;
  double lipschitz_hint = 0.0;  // curvature bound 2*lambda_max; > 0 skips power iteration
};

struct QpResult {
  Eigen::VectorXd z;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;
};

// Minimizes f(z) = z^T H z + c^T z over the per-video capped simplexes
// { z_i : sum(z_i) = s, 0 <= z_i <= 1 } by projected gradient with step
// 1/L, where L bounds the curvature 2*lambda_max(H). If a step increases f
// the curvature estimate is doubled and the step retried.
QpResult minimize_quadratic(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply_h,
                            const Eigen::VectorXd& c, const Eigen::VectorXd& z0,
                            const std::vector<Eigen::Index>& offsets, double s,
                            const QpOptions& options);

// One inner step of the difference-of-convex scheme: minimizes
// z^T Q1 z - 2 anchor^T Q2 z over the feasible set, warm-started at `anchor`.
QpResult solve_qp(const GramOperators& ops, const Eigen::VectorXd& anchor,
                  const QpOptions& options);

}  // namespace vpsumm
