#include "vpsumm/cccp.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

namespace vpsumm {

namespace {

void warn(std::vector<std::string>* warnings, const std::string& message) {
  if (warnings != nullptr) {
    warnings->push_back(message);
  } else {
    std::cerr << "warning: " << message << "\n";
  }
}

std::vector<std::vector<Eigen::Index>> combinations(Eigen::Index t, Eigen::Index s) {
  std::vector<std::vector<Eigen::Index>> all;
  std::vector<Eigen::Index> current(static_cast<std::size_t>(s));
  for (Eigen::Index i = 0; i < s; ++i) current[static_cast<std::size_t>(i)] = i;
  while (true) {
    all.push_back(current);
    // Advance the rightmost index that can still move (lexicographic order).
    Eigen::Index pos = s - 1;
    while (pos >= 0 && current[static_cast<std::size_t>(pos)] == t - s + pos) --pos;
    if (pos < 0) break;
    ++current[static_cast<std::size_t>(pos)];
    for (Eigen::Index j = pos + 1; j < s; ++j) {
      current[static_cast<std::size_t>(j)] = current[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return all;
}

}  // namespace

SelectionState init_selection(const Corpus& corpus, Eigen::Index s) {
  if (s < 1 || s > corpus.min_clips()) {
    throw Error(ErrorCode::OutOfRange, "summary length s=" + std::to_string(s) +
                                           " outside [1, " + std::to_string(corpus.min_clips()) +
                                           "]");
  }
  SelectionState state;
  state.offsets = corpus.offsets;
  state.z.resize(corpus.total_clips);
  for (Eigen::Index i = 0; i < corpus.video_count(); ++i) {
    const Eigen::Index t = corpus.clips_of(i);
    state.slice(i).setConstant(static_cast<double>(s) / static_cast<double>(t));
  }
  return state;
}

Summary round_selection(const Corpus& corpus, const Eigen::VectorXd& z, Eigen::Index s) {
  if (z.size() != corpus.total_clips) {
    throw Error(ErrorCode::DimensionMismatch, "selection vector has " + std::to_string(z.size()) +
                                                  " entries, corpus has " +
                                                  std::to_string(corpus.total_clips) + " clips");
  }
  if (s < 1 || s > corpus.min_clips()) {
    throw Error(ErrorCode::OutOfRange, "summary length s out of range");
  }
  Summary summary;
  for (Eigen::Index i = 0; i < corpus.video_count(); ++i) {
    const Eigen::Index t = corpus.clips_of(i);
    const Eigen::Index offset = corpus.offsets[static_cast<std::size_t>(i)];
    std::vector<Eigen::Index> order(static_cast<std::size_t>(t));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    // stable_sort keeps ties in index order, so equal values favor the
    // lower clip index.
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return z[offset + a] > z[offset + b];
    });
    VideoSummary video;
    video.video_id = corpus.videos[static_cast<std::size_t>(i)].video_id;
    video.selected.assign(order.begin(), order.begin() + s);
    std::sort(video.selected.begin(), video.selected.end());
    video.scores.resize(static_cast<std::size_t>(t));
    for (Eigen::Index j = 0; j < t; ++j) {
      video.scores[static_cast<std::size_t>(j)] = z[offset + j];
    }
    summary.videos.push_back(std::move(video));
  }
  return summary;
}

Summary cccp_solve(const Corpus& corpus, const Hyperparams& hp, const CccpOptions& options,
                   std::vector<std::string>* warnings) {
  if (options.max_outer < 1) {
    throw Error(ErrorCode::InvalidArgument, "max_outer must be at least 1");
  }
  if (options.rel_decrease_tol <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "rel_decrease_tol must be positive");
  }
  const GramOperators ops(corpus, hp);

  // One curvature bound serves every inner solve; Q1 does not change.
  QpOptions qp_options = options.qp;
  qp_options.seed = options.seed;
  if (qp_options.lipschitz_hint <= 0.0) {
    qp_options.lipschitz_hint =
        2.0 * lipschitz_estimate([&](const Eigen::VectorXd& v) { return ops.apply_q1(v); },
                                 ops.size(), qp_options.power_iters, qp_options.power_safety,
                                 qp_options.seed);
  }

  Eigen::VectorXd z = init_selection(corpus, hp.s).z;
  std::vector<double> history{objective(ops, z)};
  bool converged = false;
  int outer = 0;
  for (; outer < options.max_outer; ++outer) {
    const QpResult inner = solve_qp(ops, z, qp_options);
    if (!inner.converged) {
      warn(warnings, "inner solve hit max_iters at outer iteration " + std::to_string(outer + 1));
    }
    z = inner.z;
    const double value = objective(ops, z);
    const double previous = history.back();
    history.push_back(value);
    if (previous - value < options.rel_decrease_tol * (1.0 + std::abs(previous))) {
      converged = true;
      ++outer;
      break;
    }
  }

  Summary summary = round_selection(corpus, z, hp.s);
  summary.objective_history = std::move(history);
  summary.outer_iterations = outer;
  summary.converged = converged;
  return summary;
}

BruteForceResult brute_force(const Corpus& corpus, const Hyperparams& hp, double cap) {
  hp.validate(corpus);
  double total = 1.0;
  std::vector<std::vector<std::vector<Eigen::Index>>> per_video;
  for (Eigen::Index i = 0; i < corpus.video_count(); ++i) {
    per_video.push_back(combinations(corpus.clips_of(i), hp.s));
    total *= static_cast<double>(per_video.back().size());
    if (total > cap) {
      throw Error(ErrorCode::CapExceeded,
                  "selection space exceeds the enumeration cap of " + std::to_string(cap));
    }
  }
  const Eigen::MatrixXd q = dense_q(corpus, hp);

  const std::size_t n_videos = per_video.size();
  std::vector<std::size_t> odometer(n_videos, 0);
  Eigen::VectorXd z(corpus.total_clips);
  BruteForceResult best;
  bool first = true;
  while (true) {
    z.setZero();
    for (std::size_t i = 0; i < n_videos; ++i) {
      const Eigen::Index offset = corpus.offsets[i];
      for (const Eigen::Index clip : per_video[i][odometer[i]]) z[offset + clip] = 1.0;
    }
    const double value = z.dot(q * z);
    if (first || value < best.objective) {
      first = false;
      best.objective = value;
      best.z = z;
      best.selected.clear();
      for (std::size_t i = 0; i < n_videos; ++i) best.selected.push_back(per_video[i][odometer[i]]);
    }
    // Odometer over videos, rightmost fastest.
    std::size_t pos = n_videos;
    while (pos > 0) {
      --pos;
      if (++odometer[pos] < per_video[pos].size()) break;
      odometer[pos] = 0;
      if (pos == 0) return best;
    }
  }
}

}  // namespace vpsumm
