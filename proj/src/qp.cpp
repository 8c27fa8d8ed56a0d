#include "vpsumm/qp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace vpsumm {

namespace {

// Sum of clip(values - theta, 0, 1) in ascending index order. The fixed
// summation order keeps the result identical across input permutations.
double clipped_sum(const Eigen::VectorXd& sorted, double theta) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < sorted.size(); ++i) {
    total += std::clamp(sorted[i] - theta, 0.0, 1.0);
  }
  return total;
}

Eigen::VectorXd project_blocks(const Eigen::VectorXd& v, const std::vector<Eigen::Index>& offsets,
                               double s) {
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i + 1 < offsets.size(); ++i) {
    const Eigen::Index begin = offsets[i];
    const Eigen::Index len = offsets[i + 1] - begin;
    out.segment(begin, len) = project_capped_simplex(v.segment(begin, len), s);
  }
  return out;
}

}  // namespace

Eigen::VectorXd project_capped_simplex(const Eigen::VectorXd& v, double s) {
  const Eigen::Index n = v.size();
  if (n == 0) {
    throw Error(ErrorCode::InvalidArgument, "cannot project an empty vector");
  }
  if (!v.allFinite() || !std::isfinite(s)) {
    throw Error(ErrorCode::NonFiniteValue, "projection input contains NaN or infinity");
  }
  if (s <= 0.0 || s > static_cast<double>(n)) {
    throw Error(ErrorCode::OutOfRange, "target sum " + std::to_string(s) +
                                           " outside (0, " + std::to_string(n) + "]");
  }

  // Feasible inputs project to themselves; returning v unchanged makes the
  // projection exactly idempotent.
  if ((v.array() >= 0.0).all() && (v.array() <= 1.0).all() &&
      std::abs(v.sum() - s) <= 1e-10) {
    return v;
  }
  // A budget equal to the dimension saturates every cap.
  if (s == static_cast<double>(n)) {
    return Eigen::VectorXd::Ones(n);
  }

  Eigen::VectorXd sorted = v;
  std::sort(sorted.data(), sorted.data() + n);

  // clipped_sum is non-increasing in theta with value n at lo and 0 at hi.
  double lo = sorted[0] - 1.0;
  double hi = sorted[n - 1];
  for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (clipped_sum(sorted, mid) >= s) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double theta = 0.5 * (lo + hi);

  // Snap to the exact threshold implied by the active sets, when stable.
  Eigen::Index n_upper = 0;
  Eigen::Index n_free = 0;
  double free_sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = sorted[i] - theta;
    if (t >= 1.0) {
      ++n_upper;
    } else if (t > 0.0) {
      ++n_free;
      free_sum += sorted[i];
    }
  }
  if (n_free > 0) {
    const double exact =
        (free_sum + static_cast<double>(n_upper) - s) / static_cast<double>(n_free);
    Eigen::Index check_upper = 0;
    Eigen::Index check_free = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double t = sorted[i] - exact;
      if (t >= 1.0) {
        ++check_upper;
      } else if (t > 0.0) {
        ++check_free;
      }
    }
    if (check_upper == n_upper && check_free == n_free) {
      theta = exact;
    }
  }

  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out[i] = std::clamp(v[i] - theta, 0.0, 1.0);
  }
  return out;
}

double lipschitz_estimate(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                          Eigen::Index dim, int iters, double safety, std::uint64_t seed,
                          double floor) {
  if (dim <= 0) {
    throw Error(ErrorCode::InvalidArgument, "operator dimension must be positive");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = normal(rng);
  v.normalize();

  double estimate = 0.0;
  for (int t = 0; t < iters; ++t) {
    Eigen::VectorXd w = apply(v);
    const double norm = w.norm();
    if (!std::isfinite(norm)) {
      throw Error(ErrorCode::NonFiniteValue, "operator produced a non-finite image");
    }
    if (norm <= floor) break;  // numerically zero operator
    estimate = std::max(estimate, norm);
    v = w / norm;
  }
  return std::max(safety * estimate, floor);
}

QpResult minimize_quadratic(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply_h,
                            const Eigen::VectorXd& c, const Eigen::VectorXd& z0,
                            const std::vector<Eigen::Index>& offsets, double s,
                            const QpOptions& options) {
  if (offsets.size() < 2 || offsets.front() != 0 || offsets.back() != z0.size()) {
    throw Error(ErrorCode::InvalidArgument, "block offsets do not partition the vector");
  }
  if (c.size() != z0.size()) {
    throw Error(ErrorCode::DimensionMismatch, "linear term has " + std::to_string(c.size()) +
                                                  " entries, expected " +
                                                  std::to_string(z0.size()));
  }
  if (options.max_iters < 1) {
    throw Error(ErrorCode::InvalidArgument, "max_iters must be at least 1");
  }

  double curvature = options.lipschitz_hint;
  if (curvature <= 0.0) {
    curvature = 2.0 * lipschitz_estimate(apply_h, z0.size(), options.power_iters,
                                         options.power_safety, options.seed);
  }
  curvature = std::max(curvature, 1e-12);

  const auto value = [&](const Eigen::VectorXd& z) { return z.dot(apply_h(z)) + c.dot(z); };

  QpResult result;
  result.z = project_blocks(z0, offsets, s);
  result.objective = value(result.z);
  result.objective_trace.push_back(result.objective);

  for (int iter = 0; iter < options.max_iters; ++iter) {
    const Eigen::VectorXd grad = 2.0 * apply_h(result.z) + c;
    if (options.step_rule == StepRule::kBacktracking && iter > 0) {
      curvature = std::max(0.5 * curvature, 1e-12);
    }
    Eigen::VectorXd next;
    double next_value = 0.0;
    // A step that raises the objective means the curvature estimate is too
    // low; doubling it shrinks the step until the quadratic model holds.
    for (int attempt = 0; attempt < 64; ++attempt) {
      next = project_blocks(result.z - grad / curvature, offsets, s);
      next_value = value(next);
      if (next_value <= result.objective + 1e-12 * (1.0 + std::abs(result.objective))) break;
      curvature *= 2.0;
    }
    const double move = (next - result.z).lpNorm<Eigen::Infinity>();
    const double decrease = result.objective - next_value;
    result.z = std::move(next);
    result.objective = next_value;
    result.objective_trace.push_back(next_value);
    result.iterations = iter + 1;
    if (move <= options.grad_map_tol ||
        (decrease >= 0.0 && decrease <= options.obj_rel_tol * (1.0 + std::abs(next_value)))) {
      result.converged = true;
      break;
    }
  }
  return result;
}

QpResult solve_qp(const GramOperators& ops, const Eigen::VectorXd& anchor,
                  const QpOptions& options) {
  if (anchor.size() != ops.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "anchor has " + std::to_string(anchor.size()) + " entries, corpus has " +
                    std::to_string(ops.size()) + " clips");
  }
  QpOptions inner = options;
  if (inner.lipschitz_hint <= 0.0) {
    inner.lipschitz_hint =
        2.0 * lipschitz_estimate([&](const Eigen::VectorXd& z) { return ops.apply_q1(z); },
                                 ops.size(), options.power_iters, options.power_safety,
                                 options.seed);
  }
  const Eigen::VectorXd c = -2.0 * ops.apply_q2(anchor);
  return minimize_quadratic([&](const Eigen::VectorXd& z) { return ops.apply_q1(z); }, c, anchor,
                            ops.corpus().offsets, static_cast<double>(ops.hyperparams().s),
                            inner);
}

}  // namespace vpsumm
