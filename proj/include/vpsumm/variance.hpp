#pragma once

#include <Eigen/Core>
#include <optional>

#include "vpsumm/corpus.hpp"
#include "vpsumm/error.hpp"

namespace vpsumm {

struct Hyperparams {
  double lambda1 = 0.05;  // inner-summary variance weight
  double lambda2 = 0.5;   // within-group variance weight
  double lambda3 = 0.5;   // between-group variance weight
  Eigen::Index s = 2;     // clips selected per video

  void validate(const Corpus& corpus) const;
};

// Stacked relaxed selection over all clips, partitioned per video.
struct SelectionState {
  Eigen::VectorXd z;                    // total_clips entries in [0, 1]
  std::vector<Eigen::Index> offsets;    // N+1, same layout as Corpus::offsets

  Eigen::VectorBlock<Eigen::VectorXd> slice(Eigen::Index video) {
    return z.segment(offsets[static_cast<std::size_t>(video)],
                     offsets[static_cast<std::size_t>(video) + 1] -
                         offsets[static_cast<std::size_t>(video)]);
  }
  Eigen::VectorBlock<const Eigen::VectorXd> slice(Eigen::Index video) const {
    return z.segment(offsets[static_cast<std::size_t>(video)],
                     offsets[static_cast<std::size_t>(video) + 1] -
                         offsets[static_cast<std::size_t>(video)]);
  }
};

// Matrix-free appliers for the four clip-similarity operators and the
// weighted combinations built from them. Everything works on the stacked
// selection vector and touches the feature matrices only through products
// X_i^T u and X_i w, so no T x T matrix is ever formed.
//
// With s the per-video summary length, N the number of videos, and n_k the
// number of videos in group k:
//   F = diag(x_t . x_t)
//   D = (1/s)   blockdiag_i X_i X_i^T          (same video)
//   C = (1/s)   blockdiag_k (1/n_k) Xg_k Xg_k^T (same group)
//   A = (1/(N s)) X X^T                         (whole corpus)
class GramOperators {
 public:
  GramOperators(const Corpus& corpus, const Hyperparams& hp);

  const Corpus& corpus() const { return *corpus_; }
  const Hyperparams& hyperparams() const { return hp_; }
  Eigen::Index size() const { return corpus_->total_clips; }
  const Eigen::VectorXd& f_diagonal() const { return f_diag_; }

  Eigen::VectorXd apply_f(const Eigen::VectorXd& z) const;
  Eigen::VectorXd apply_d(const Eigen::VectorXd& z) const;
  Eigen::VectorXd apply_c(const Eigen::VectorXd& z) const;
  Eigen::VectorXd apply_a(const Eigen::VectorXd& z) const;

  // Convex split of the objective matrix Q = -l1 F + (l1+l2) D - (l2+l3) C + l3 A:
  // Q = Q1 - Q2 with Q1 = (l1+l2) D + l3 A and Q2 = l1 F + (l2+l3) C, both PSD.
  Eigen::VectorXd apply_q1(const Eigen::VectorXd& z) const;
  Eigen::VectorXd apply_q2(const Eigen::VectorXd& z) const;
  Eigen::VectorXd apply_q(const Eigen::VectorXd& z) const;

 private:
  // Shared two-sweep core: returns sum_i X_i (cf*u_i + cg*g_{k(i)} + ca*u)
  // plus diag_coeff * F z, where u_i = X_i^T z_i, g_k averages u_i over the
  // group, and u averages over all videos.
  Eigen::VectorXd combine(const Eigen::VectorXd& z, double diag_coeff, double cf, double cg,
                          double ca) const;

  const Corpus* corpus_;
  Hyperparams hp_;
  Eigen::VectorXd f_diag_;  // squared row norms of the stacked features
};

inline GramOperators build_operators(const Corpus& corpus, const Hyperparams& hp) {
  return GramOperators(corpus, hp);
}

// Scatter traces as quadratic forms in the stacked selection. The quadratic
// form of trace_inner_summary matches its definitional sum only for binary
// selections; the other two are exact for any real-valued z.
double trace_inner_summary(const GramOperators& ops, const Eigen::VectorXd& z);
double trace_within_group(const GramOperators& ops, const Eigen::VectorXd& z);
double trace_between_group(const GramOperators& ops, const Eigen::VectorXd& z);

// z^T Q z, the quantity the solver minimizes.
double objective(const GramOperators& ops, const Eigen::VectorXd& z);

inline double trace_inner_summary(const GramOperators& ops, const SelectionState& state) {
  return trace_inner_summary(ops, state.z);
}
inline double trace_within_group(const GramOperators& ops, const SelectionState& state) {
  return trace_within_group(ops, state.z);
}
inline double trace_between_group(const GramOperators& ops, const SelectionState& state) {
  return trace_between_group(ops, state.z);
}
inline double objective(const GramOperators& ops, const SelectionState& state) {
  return objective(ops, state.z);
}

// Dense realizations of F, D, C, A for small corpora. Refuses to build
// anything above `cap` total clips.
struct DenseBlocks {
  Eigen::MatrixXd f, d, c, a;
  Hyperparams hp;

  Eigen::MatrixXd q1() const { return (hp.lambda1 + hp.lambda2) * d + hp.lambda3 * a; }
  Eigen::MatrixXd q2() const { return hp.lambda1 * f + (hp.lambda2 + hp.lambda3) * c; }
  Eigen::MatrixXd q() const { return q1() - q2(); }
};
DenseBlocks dense_blocks(const Corpus& corpus, const Hyperparams& hp, Eigen::Index cap = 512);
Eigen::MatrixXd dense_q(const Corpus& corpus, const Hyperparams& hp, Eigen::Index cap = 512);

// Weight of the (i, j) clip pair in the merged pairwise form of the
// objective: 0 on the diagonal, l1 within a video, -l2 across videos of one
// group, l3 across groups.
double pair_weight(const Corpus& corpus, const Hyperparams& hp, Eigen::Index clip_i,
                   Eigen::Index clip_j);

// Empirical sampling distribution induced by a selection: p_t = z_t / (N s).
Eigen::VectorXd sampling_distribution(const GramOperators& ops, const Eigen::VectorXd& z);

}  // namespace vpsumm
