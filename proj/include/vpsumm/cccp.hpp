#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "vpsumm/corpus.hpp"
#include "vpsumm/qp.hpp"
#include "vpsumm/variance.hpp"

namespace vpsumm {

struct CccpOptions {
  int max_outer = 50;
  double rel_decrease_tol = 1e-6;
  QpOptions qp;
  std::uint64_t seed = 0;
};

struct VideoSummary {
  std::string video_id;
  std::vector<Eigen::Index> selected;  // exactly s indices, strictly increasing
  std::vector<double> scores;          // full continuous selection slice, length T_i
};

struct Summary {
  std::vector<VideoSummary> videos;        // corpus order
  std::vector<double> objective_history;   // relaxed z^T Q z, initial value first
  int outer_iterations = 0;
  bool converged = false;
};

// Feasible uniform start: z_i = (s/T_i) * ones(T_i) for every video. The
// per-video sums equal s by construction, which the warm-started inner
// solver requires.
SelectionState init_selection(const Corpus& corpus, Eigen::Index s);

// Per video, keeps the s clips with largest z; ties go to the lower index.
Summary round_selection(const Corpus& corpus, const Eigen::VectorXd& z, Eigen::Index s);

// Outer loop: repeatedly linearize the concave part at the current iterate
// and solve the convex surrogate (module qp), warm-started, until the true
// relaxed objective stops decreasing or max_outer is hit. Inner
// non-convergence is reported through `warnings`, not as a failure.
Summary cccp_solve(const Corpus& corpus, const Hyperparams& hp, const CccpOptions& options,
                   std::vector<std::string>* warnings = nullptr);

struct BruteForceResult {
  Eigen::VectorXd z;  // binary stacked selection
  double objective = 0.0;
  std::vector<std::vector<Eigen::Index>> selected;  // per video, increasing
};

// Exhaustive minimizer of z^T Q z over all binary feasible selections,
// using the dense Q realization. The number of candidate selections
// prod_i C(T_i, s) must not exceed `cap`. Ties resolve to the selection
// enumerated first (lexicographic per-video combination order).
BruteForceResult brute_force(const Corpus& corpus, const Hyperparams& hp, double cap = 1e6);

}  // namespace vpsumm
