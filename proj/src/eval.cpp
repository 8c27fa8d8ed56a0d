#include "vpsumm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <random>
#include <set>

namespace vpsumm {

namespace {

void warn(std::vector<std::string>* warnings, const std::string& message) {
  if (warnings != nullptr) {
    warnings->push_back(message);
  } else {
    std::cerr << "warning: " << message << "\n";
  }
}

// Indices sorted by descending value; equal values keep index order.
std::vector<std::size_t> ranking(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return order;
}

}  // namespace

std::vector<int> ground_truth_from_scores(const std::vector<double>& scores, double ratio) {
  if (scores.empty()) {
    throw Error(ErrorCode::InvalidArgument, "cannot build ground truth from empty scores");
  }
  if (!(ratio > 0.0) || ratio > 1.0) {
    throw Error(ErrorCode::OutOfRange, "ratio must lie in (0, 1]");
  }
  // The small slack keeps counts like 0.3 * 10 from rounding up to 4.
  const auto positives = static_cast<std::size_t>(
      std::ceil(ratio * static_cast<double>(scores.size()) - 1e-9));
  const auto order = ranking(scores);
  std::vector<int> labels(scores.size(), 0);
  for (std::size_t r = 0; r < positives; ++r) labels[order[r]] = 1;
  return labels;
}

double average_precision(const std::vector<int>& labels, const std::vector<double>& scores,
                         std::optional<int> k) {
  if (labels.size() != scores.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "labels and scores have different lengths");
  }
  if (labels.empty()) {
    throw Error(ErrorCode::InvalidArgument, "cannot compute AP of an empty ranking");
  }
  if (k.has_value() && *k < 1) {
    throw Error(ErrorCode::InvalidArgument, "cutoff k must be at least 1");
  }
  std::size_t n_positive = 0;
  for (const int label : labels) {
    if (label != 0 && label != 1) {
      throw Error(ErrorCode::InvalidArgument, "labels must be 0 or 1");
    }
    n_positive += static_cast<std::size_t>(label);
  }
  if (n_positive == 0) {
    if (!k.has_value()) {
      throw Error(ErrorCode::InvalidArgument, "no positive labels and no cutoff");
    }
    return 0.0;
  }

  const auto order = ranking(scores);
  const std::size_t limit =
      k.has_value() ? std::min<std::size_t>(static_cast<std::size_t>(*k), order.size())
                    : order.size();
  std::size_t hits = 0;
  double sum = 0.0;
  for (std::size_t r = 0; r < limit; ++r) {
    if (labels[order[r]] == 1) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(r + 1);
    }
  }
  const std::size_t denom =
      k.has_value() ? std::min<std::size_t>(static_cast<std::size_t>(*k), n_positive) : n_positive;
  return sum / static_cast<double>(denom);
}

EvalReport map_report(const std::map<std::string, std::vector<double>>& predictions,
                      const AnnotationSet& annotations,
                      const std::map<std::string, std::string>& grouping, int k, double ratio) {
  if (annotations.entries.empty()) {
    throw Error(ErrorCode::InvalidArgument, "annotation set is empty");
  }
  EvalReport report;
  report.k = k;
  report.ratio = ratio;

  std::map<std::string, std::pair<double, std::size_t>> group_acc;  // sum, count
  double overall_sum = 0.0;
  for (const auto& [video_id, concept_id, annotator_id] : annotations.triples()) {
    const auto pred_it = predictions.find(video_id);
    if (pred_it == predictions.end()) {
      throw Error(ErrorCode::MissingPrediction,
                  "no prediction for annotated video '" + video_id + "'");
    }
    const auto group_it = grouping.find(video_id);
    if (group_it == grouping.end()) {
      throw Error(ErrorCode::InvalidArgument,
                  "no group label for annotated video '" + video_id + "'");
    }
    const std::vector<double> truth_scores =
        annotations.score_vector(video_id, concept_id, annotator_id);
    if (pred_it->second.size() != truth_scores.size()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "prediction for video '" + video_id + "' has " +
                      std::to_string(pred_it->second.size()) + " scores, expected " +
                      std::to_string(truth_scores.size()));
    }
    const std::optional<int> cutoff = k >= 1 ? std::optional<int>(k) : std::nullopt;
    const double ap =
        average_precision(ground_truth_from_scores(truth_scores, ratio), pred_it->second, cutoff);
    report.triples.push_back({video_id, concept_id, annotator_id, ap});
    overall_sum += ap;
    auto& acc = group_acc[group_it->second];
    acc.first += ap;
    acc.second += 1;
  }
  for (const auto& [label, acc] : group_acc) {
    report.group_map[label] = acc.first / static_cast<double>(acc.second);
  }
  report.overall_map = overall_sum / static_cast<double>(report.triples.size());
  return report;
}

AnnotatorAgreement inter_annotator_similarity(const AnnotationSet& annotations,
                                              std::vector<std::string>* warnings) {
  if (annotations.annotator_ids().size() < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "agreement needs score vectors from at least two annotators");
  }
  struct Centered {
    std::string concept_id;
    std::string annotator_id;
    Eigen::VectorXd values;
  };

  double inner_sum = 0.0;
  std::size_t inner_count = 0;
  double inter_sum = 0.0;
  std::size_t inter_count = 0;
  const auto triples = annotations.triples();
  for (const auto& [video_id, clip_count] : annotations.clip_counts) {
    std::vector<Centered> vectors;
    for (const auto& [v, concept_id, annotator_id] : triples) {
      if (v != video_id) continue;
      const std::vector<double> raw = annotations.score_vector(v, concept_id, annotator_id);
      Eigen::VectorXd values =
          Eigen::Map<const Eigen::VectorXd>(raw.data(), static_cast<Eigen::Index>(raw.size()));
      values.array() -= values.mean();
      if (values.norm() == 0.0) {
        warn(warnings, "scores of (video '" + v + "', concept '" + concept_id +
                           "', annotator '" + annotator_id + "') are constant; pair skipped");
        continue;
      }
      vectors.push_back({concept_id, annotator_id, std::move(values)});
    }
    for (std::size_t a = 0; a < vectors.size(); ++a) {
      for (std::size_t b = a + 1; b < vectors.size(); ++b) {
        const double cosine = vectors[a].values.dot(vectors[b].values) /
                              (vectors[a].values.norm() * vectors[b].values.norm());
        if (vectors[a].concept_id == vectors[b].concept_id) {
          inner_sum += cosine;
          ++inner_count;
        } else {
          inter_sum += cosine;
          ++inter_count;
        }
      }
    }
  }
  AnnotatorAgreement agreement;
  agreement.inner_concept = inner_count == 0 ? 0.0 : inner_sum / static_cast<double>(inner_count);
  agreement.inter_concept = inter_count == 0 ? 0.0 : inter_sum / static_cast<double>(inter_count);
  if (inner_count == 0) warn(warnings, "no same-concept score-vector pairs found");
  if (inter_count == 0) warn(warnings, "no cross-concept score-vector pairs found");
  return agreement;
}

namespace {

struct GroupClustering {
  Eigen::MatrixXd centers;             // k_eff x d
  std::vector<Eigen::Index> by_size;   // cluster indices, largest first
};

GroupClustering cluster_group(const Eigen::MatrixXd& points, int clusters, std::mt19937_64& rng,
                              std::vector<std::string>* warnings, const std::string& group_label) {
  const Eigen::Index n = points.rows();
  // Exact-duplicate rows cannot hold separate centers.
  std::vector<Eigen::Index> distinct;
  for (Eigen::Index i = 0; i < n; ++i) {
    bool fresh = true;
    for (const Eigen::Index j : distinct) {
      if (points.row(i) == points.row(j)) {
        fresh = false;
        break;
      }
    }
    if (fresh) distinct.push_back(i);
  }
  Eigen::Index k = std::min<Eigen::Index>(clusters, static_cast<Eigen::Index>(distinct.size()));
  if (k < clusters) {
    warn(warnings, "group '" + group_label + "' has only " + std::to_string(distinct.size()) +
                       " distinct clips; clusters reduced to " + std::to_string(k));
  }

  // k-means++ seeding over the distinct rows.
  GroupClustering result;
  result.centers.resize(k, points.cols());
  std::vector<double> min_dist(static_cast<std::size_t>(n),
                               std::numeric_limits<double>::infinity());
  std::uniform_int_distribution<std::size_t> first(0, distinct.size() - 1);
  result.centers.row(0) = points.row(distinct[first(rng)]);
  for (Eigen::Index c = 1; c < k; ++c) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double dist = (points.row(i) - result.centers.row(c - 1)).squaredNorm();
      min_dist[static_cast<std::size_t>(i)] =
          std::min(min_dist[static_cast<std::size_t>(i)], dist);
      total += min_dist[static_cast<std::size_t>(i)];
    }
    std::uniform_real_distribution<double> pick(0.0, total);
    double target = pick(rng);
    // Sample proportionally to squared distance; zero-distance points (the
    // centers themselves) are never eligible.
    Eigen::Index chosen = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (min_dist[static_cast<std::size_t>(i)] <= 0.0) continue;
      chosen = i;
      target -= min_dist[static_cast<std::size_t>(i)];
      if (target < 0.0) break;
    }
    result.centers.row(c) = points.row(chosen);
  }

  // Lloyd iterations with fixed tie-breaking toward lower cluster index.
  std::vector<Eigen::Index> assignment(static_cast<std::size_t>(n), 0);
  double previous_inertia = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 300; ++iter) {
    double inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index best = 0;
      double best_dist = (points.row(i) - result.centers.row(0)).squaredNorm();
      for (Eigen::Index c = 1; c < k; ++c) {
        const double dist = (points.row(i) - result.centers.row(c)).squaredNorm();
        if (dist < best_dist) {
          best_dist = dist;
          best = c;
        }
      }
      assignment[static_cast<std::size_t>(i)] = best;
      inertia += best_dist;
    }
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(assignment[static_cast<std::size_t>(i)]) += points.row(i);
      counts[static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)])] += 1;
    }
    for (Eigen::Index c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        result.centers.row(c) =
            sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      }  // empty clusters keep their previous center
    }
    if (previous_inertia - inertia <= 1e-6 * std::max(previous_inertia, 1e-300)) break;
    previous_inertia = inertia;
  }

  // Final assignment sizes determine the visiting order.
  std::vector<Eigen::Index> sizes(static_cast<std::size_t>(k), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index best = 0;
    double best_dist = (points.row(i) - result.centers.row(0)).squaredNorm();
    for (Eigen::Index c = 1; c < k; ++c) {
      const double dist = (points.row(i) - result.centers.row(c)).squaredNorm();
      if (dist < best_dist) {
        best_dist = dist;
        best = c;
      }
    }
    sizes[static_cast<std::size_t>(best)] += 1;
  }
  result.by_size.resize(static_cast<std::size_t>(k));
  std::iota(result.by_size.begin(), result.by_size.end(), Eigen::Index{0});
  std::stable_sort(result.by_size.begin(), result.by_size.end(), [&](Eigen::Index a,
                                                                     Eigen::Index b) {
    return sizes[static_cast<std::size_t>(a)] > sizes[static_cast<std::size_t>(b)];
  });
  return result;
}

}  // namespace

Summary kmeans_baseline(const Corpus& corpus, Eigen::Index s, int clusters, std::uint64_t seed,
                        std::vector<std::string>* warnings) {
  if (s < 1 || s > corpus.min_clips()) {
    throw Error(ErrorCode::OutOfRange, "summary length s out of range");
  }
  if (clusters < 1) {
    throw Error(ErrorCode::InvalidArgument, "cluster count must be at least 1");
  }

  Summary summary;
  summary.converged = true;
  summary.videos.resize(static_cast<std::size_t>(corpus.video_count()));

  for (int g = 0; g < corpus.group_count(); ++g) {
    const Eigen::Index v0 = corpus.group_video_offsets[static_cast<std::size_t>(g)];
    const Eigen::Index v1 = corpus.group_video_offsets[static_cast<std::size_t>(g) + 1];
    const Eigen::Index row0 = corpus.offsets[static_cast<std::size_t>(v0)];
    const Eigen::Index rows = corpus.offsets[static_cast<std::size_t>(v1)] - row0;
    Eigen::MatrixXd points(rows, corpus.dim);
    for (Eigen::Index v = v0; v < v1; ++v) {
      points.middleRows(corpus.offsets[static_cast<std::size_t>(v)] - row0,
                        corpus.clips_of(v)) = corpus.videos[static_cast<std::size_t>(v)].features;
    }
    // Group index folds into the seed so each group clusters reproducibly.
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(g) * 0x9e3779b97f4a7c15ULL);
    const GroupClustering clustering =
        cluster_group(points, clusters, rng, warnings,
                      corpus.grouping.group_labels[static_cast<std::size_t>(g)]);

    for (Eigen::Index v = v0; v < v1; ++v) {
      const Eigen::Index t = corpus.clips_of(v);
      const auto& features = corpus.videos[static_cast<std::size_t>(v)].features;
      std::vector<bool> taken(static_cast<std::size_t>(t), false);
      std::vector<Eigen::Index> pick_order;
      // Visit clusters from largest down, cycling, and take the nearest
      // not-yet-ranked clip of this video each visit.
      for (std::size_t visit = 0; static_cast<Eigen::Index>(pick_order.size()) < t; ++visit) {
        const Eigen::Index cluster =
            clustering.by_size[visit % clustering.by_size.size()];
        Eigen::Index best = -1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (Eigen::Index clip = 0; clip < t; ++clip) {
          if (taken[static_cast<std::size_t>(clip)]) continue;
          const double dist =
              (features.row(clip) - clustering.centers.row(cluster)).squaredNorm();
          if (dist < best_dist) {
            best_dist = dist;
            best = clip;
          }
        }
        taken[static_cast<std::size_t>(best)] = true;
        pick_order.push_back(best);
      }

      VideoSummary& video = summary.videos[static_cast<std::size_t>(v)];
      video.video_id = corpus.videos[static_cast<std::size_t>(v)].video_id;
      video.selected.assign(pick_order.begin(), pick_order.begin() + s);
      std::sort(video.selected.begin(), video.selected.end());
      video.scores.resize(static_cast<std::size_t>(t));
      for (std::size_t rank = 0; rank < pick_order.size(); ++rank) {
        video.scores[static_cast<std::size_t>(pick_order[rank])] =
            static_cast<double>(t) - static_cast<double>(rank);
      }
    }
  }
  return summary;
}

}  // namespace vpsumm
