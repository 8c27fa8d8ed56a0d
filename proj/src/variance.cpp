#include "vpsumm/variance.hpp"

#include <cmath>
#include <string>

#include "vpsumm/threads.hpp"

namespace vpsumm {

void Hyperparams::validate(const Corpus& corpus) const {
  for (const auto& [name, value] :
       {std::pair{"lambda1", lambda1}, {"lambda2", lambda2}, {"lambda3", lambda3}}) {
    if (!std::isfinite(value) || value < 0.0) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string(name) + " must be finite and non-negative, got " +
                      std::to_string(value));
    }
  }
  if (s < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "summary length s must be at least 1, got " + std::to_string(s));
  }
  if (s > corpus.min_clips()) {
    throw Error(ErrorCode::OutOfRange, "summary length s=" + std::to_string(s) +
                                           " exceeds the shortest video (" +
                                           std::to_string(corpus.min_clips()) + " clips)");
  }
}

GramOperators::GramOperators(const Corpus& corpus, const Hyperparams& hp)
    : corpus_(&corpus), hp_(hp) {
  hp_.validate(corpus);
  f_diag_.resize(corpus.total_clips);
  for (Eigen::Index i = 0; i < corpus.video_count(); ++i) {
    const auto& x = corpus.videos[static_cast<std::size_t>(i)].features;
    f_diag_.segment(corpus.offsets[static_cast<std::size_t>(i)], x.rows()) =
        x.rowwise().squaredNorm();
  }
}

Eigen::VectorXd GramOperators::combine(const Eigen::VectorXd& z, double diag_coeff, double cf,
                                       double cg, double ca) const {
  if (z.size() != size()) {
    throw Error(ErrorCode::DimensionMismatch, "selection vector has " + std::to_string(z.size()) +
                                                  " entries, corpus has " +
                                                  std::to_string(size()) + " clips");
  }
  const Corpus& c = *corpus_;
  const Eigen::Index n_videos = c.video_count();
  Eigen::VectorXd out = diag_coeff == 0.0
                            ? Eigen::VectorXd::Zero(size()).eval()
                            : (diag_coeff * f_diag_.cwiseProduct(z)).eval();
  if (cf == 0.0 && cg == 0.0 && ca == 0.0) return out;

  // Sweep 1: per-video feature-space images u_i = X_i^T z_i.
  Eigen::MatrixXd u(c.dim, n_videos);
  parallel_ranges(n_videos, [&](long long begin, long long end) {
    for (long long i = begin; i < end; ++i) {
      const auto& x = c.videos[static_cast<std::size_t>(i)].features;
      u.col(i).noalias() =
          x.transpose() * z.segment(c.offsets[static_cast<std::size_t>(i)], x.rows());
    }
  });

  // Group and corpus aggregates.
  Eigen::MatrixXd group_sum = Eigen::MatrixXd::Zero(c.dim, c.group_count());
  for (Eigen::Index i = 0; i < n_videos; ++i) {
    group_sum.col(c.grouping.group_of_video[static_cast<std::size_t>(i)]) += u.col(i);
  }
  Eigen::VectorXd total = group_sum.rowwise().sum();

  // Sweep 2: map each video's combined direction back to its clips.
  parallel_ranges(n_videos, [&](long long begin, long long end) {
    Eigen::VectorXd w(c.dim);
    for (long long i = begin; i < end; ++i) {
      const auto& x = c.videos[static_cast<std::size_t>(i)].features;
      const int k = c.grouping.group_of_video[static_cast<std::size_t>(i)];
      w.setZero();
      if (cf != 0.0) w += cf * u.col(i);
      if (cg != 0.0)
        w += (cg / static_cast<double>(c.grouping.group_sizes[static_cast<std::size_t>(k)])) *
             group_sum.col(k);
      if (ca != 0.0) w += (ca / static_cast<double>(n_videos)) * total;
      out.segment(c.offsets[static_cast<std::size_t>(i)], x.rows()).noalias() += x * w;
    }
  });
  return out;
}

Eigen::VectorXd GramOperators::apply_f(const Eigen::VectorXd& z) const {
  return combine(z, 1.0, 0.0, 0.0, 0.0);
}

Eigen::VectorXd GramOperators::apply_d(const Eigen::VectorXd& z) const {
  return combine(z, 0.0, 1.0 / static_cast<double>(hp_.s), 0.0, 0.0);
}

Eigen::VectorXd GramOperators::apply_c(const Eigen::VectorXd& z) const {
  return combine(z, 0.0, 0.0, 1.0 / static_cast<double>(hp_.s), 0.0);
}

Eigen::VectorXd GramOperators::apply_a(const Eigen::VectorXd& z) const {
  return combine(z, 0.0, 0.0, 0.0, 1.0 / static_cast<double>(hp_.s));
}

Eigen::VectorXd GramOperators::apply_q1(const Eigen::VectorXd& z) const {
  const double inv_s = 1.0 / static_cast<double>(hp_.s);
  return combine(z, 0.0, (hp_.lambda1 + hp_.lambda2) * inv_s, 0.0, hp_.lambda3 * inv_s);
}

Eigen::VectorXd GramOperators::apply_q2(const Eigen::VectorXd& z) const {
  const double inv_s = 1.0 / static_cast<double>(hp_.s);
  return combine(z, hp_.lambda1, 0.0, (hp_.lambda2 + hp_.lambda3) * inv_s, 0.0);
}

Eigen::VectorXd GramOperators::apply_q(const Eigen::VectorXd& z) const {
  const double inv_s = 1.0 / static_cast<double>(hp_.s);
  return combine(z, -hp_.lambda1, (hp_.lambda1 + hp_.lambda2) * inv_s,
                 -(hp_.lambda2 + hp_.lambda3) * inv_s, hp_.lambda3 * inv_s);
}

double trace_inner_summary(const GramOperators& ops, const Eigen::VectorXd& z) {
  return z.dot(ops.apply_f(z)) - z.dot(ops.apply_d(z));
}

double trace_within_group(const GramOperators& ops, const Eigen::VectorXd& z) {
  return z.dot(ops.apply_d(z)) - z.dot(ops.apply_c(z));
}

double trace_between_group(const GramOperators& ops, const Eigen::VectorXd& z) {
  return z.dot(ops.apply_c(z)) - z.dot(ops.apply_a(z));
}

double objective(const GramOperators& ops, const Eigen::VectorXd& z) {
  return z.dot(ops.apply_q(z));
}

DenseBlocks dense_blocks(const Corpus& corpus, const Hyperparams& hp, Eigen::Index cap) {
  hp.validate(corpus);
  const Eigen::Index n = corpus.total_clips;
  if (n > cap) {
    throw Error(ErrorCode::CapExceeded, "corpus has " + std::to_string(n) +
                                            " clips, dense construction is capped at " +
                                            std::to_string(cap));
  }
  DenseBlocks blocks;
  blocks.hp = hp;
  blocks.f = Eigen::MatrixXd::Zero(n, n);
  blocks.d = Eigen::MatrixXd::Zero(n, n);
  blocks.c = Eigen::MatrixXd::Zero(n, n);
  const double inv_s = 1.0 / static_cast<double>(hp.s);

  Eigen::MatrixXd stacked(n, corpus.dim);
  for (Eigen::Index i = 0; i < corpus.video_count(); ++i) {
    const auto& x = corpus.videos[static_cast<std::size_t>(i)].features;
    const Eigen::Index o = corpus.offsets[static_cast<std::size_t>(i)];
    stacked.middleRows(o, x.rows()) = x;
    blocks.d.block(o, o, x.rows(), x.rows()) = inv_s * (x * x.transpose());
  }
  blocks.f.diagonal() = stacked.rowwise().squaredNorm();

  for (int k = 0; k < corpus.group_count(); ++k) {
    const Eigen::Index v0 = corpus.group_video_offsets[static_cast<std::size_t>(k)];
    const Eigen::Index v1 = corpus.group_video_offsets[static_cast<std::size_t>(k) + 1];
    const Eigen::Index o = corpus.offsets[static_cast<std::size_t>(v0)];
    const Eigen::Index rows = corpus.offsets[static_cast<std::size_t>(v1)] - o;
    const auto xg = stacked.middleRows(o, rows);
    blocks.c.block(o, o, rows, rows) =
        (inv_s / static_cast<double>(v1 - v0)) * (xg * xg.transpose());
  }
  blocks.a = (inv_s / static_cast<double>(corpus.video_count())) * (stacked * stacked.transpose());
  return blocks;
}

Eigen::MatrixXd dense_q(const Corpus& corpus, const Hyperparams& hp, Eigen::Index cap) {
  return dense_blocks(corpus, hp, cap).q();
}

double pair_weight(const Corpus& corpus, const Hyperparams& hp, Eigen::Index clip_i,
                   Eigen::Index clip_j) {
  if (clip_i < 0 || clip_i >= corpus.total_clips || clip_j < 0 || clip_j >= corpus.total_clips) {
    throw Error(ErrorCode::OutOfRange, "clip index out of range");
  }
  if (clip_i == clip_j) return 0.0;
  const Eigen::Index vi = corpus.video_of_clip(clip_i);
  const Eigen::Index vj = corpus.video_of_clip(clip_j);
  if (vi == vj) return hp.lambda1;
  if (corpus.grouping.group_of_video[static_cast<std::size_t>(vi)] ==
      corpus.grouping.group_of_video[static_cast<std::size_t>(vj)]) {
    return -hp.lambda2;
  }
  return hp.lambda3;
}

Eigen::VectorXd sampling_distribution(const GramOperators& ops, const Eigen::VectorXd& z) {
  if (z.size() != ops.size()) {
    throw Error(ErrorCode::DimensionMismatch, "selection vector has " + std::to_string(z.size()) +
                                                  " entries, corpus has " +
                                                  std::to_string(ops.size()) + " clips");
  }
  const double scale =
      1.0 / (static_cast<double>(ops.corpus().video_count()) *
             static_cast<double>(ops.hyperparams().s));
  return scale * z;
}

}  // namespace vpsumm
