#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vpsumm/cccp.hpp"
#include "vpsumm/corpus.hpp"

namespace vpsumm {

// Binary relevance labels: the ceil(ratio * T) clips with the highest mean
// score are positive; ties go to the lower clip index.
std::vector<int> ground_truth_from_scores(const std::vector<double>& scores, double ratio = 0.3);

// Average precision of `scores` ranking against binary `labels`. Ranking is
// by descending score with ties broken toward the lower index. Without a
// cutoff, AP averages precision over all positive ranks and needs at least
// one positive. With cutoff k, only the top-k ranks contribute and the sum
// divides by min(k, number of positives); zero positives give 0.
double average_precision(const std::vector<int>& labels, const std::vector<double>& scores,
                         std::optional<int> k = std::nullopt);

struct TripleAp {
  std::string video_id;
  std::string concept_id;
  std::string annotator_id;
  double ap = 0.0;
};

struct EvalReport {
  std::map<std::string, double> group_map;  // group label -> mean AP over its triples
  double overall_map = 0.0;                 // mean over every triple
  std::vector<TripleAp> triples;            // sorted (video, concept, annotator)
  int k = 5;
  double ratio = 0.3;
};

// One AP per annotated (video, concept, annotator) triple: the annotator's
// scores define ground truth, the prediction vector supplies the ranking.
// Every annotated video needs a prediction; `grouping` maps video ids to
// group labels for the per-group aggregation. k < 1 means no rank cutoff.
EvalReport map_report(const std::map<std::string, std::vector<double>>& predictions,
                      const AnnotationSet& annotations,
                      const std::map<std::string, std::string>& grouping, int k = 5,
                      double ratio = 0.3);

struct AnnotatorAgreement {
  double inner_concept = 0.0;  // mean cosine over same-concept vector pairs
  double inter_concept = 0.0;  // mean cosine over different-concept pairs
};

// Mean-centers every (video, concept, annotator) score vector, then averages
// cosine similarities over pairs within the same video: same-concept pairs
// feed inner_concept, different-concept pairs feed inter_concept. Vectors
// that center to zero are skipped with a warning.
AnnotatorAgreement inter_annotator_similarity(const AnnotationSet& annotations,
                                              std::vector<std::string>* warnings = nullptr);

// Clustering baseline: per group, k-means (seeded k-means++ init, at most
// 300 Lloyd iterations, relative inertia tolerance 1e-6) over all clips of
// the group; per video, clips are ranked by visiting clusters in descending
// size order (cycling) and taking the unranked clip nearest each center.
// The first s ranked clips are the summary; scores encode the full ranking.
Summary kmeans_baseline(const Corpus& corpus, Eigen::Index s, int clusters = 20,
                        std::uint64_t seed = 0, std::vector<std::string>* warnings = nullptr);

}  // namespace vpsumm
