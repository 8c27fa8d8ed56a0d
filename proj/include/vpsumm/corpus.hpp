#pragma once

#include <Eigen/Core>
#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "vpsumm/error.hpp"

namespace vpsumm {

// One video's clip-level features, one clip per row.
struct ClipFeatures {
  std::string video_id;
  Eigen::MatrixXd features;  // T_i x d
  // Optional frame ranges [begin, end) per clip, when the manifest links them.
  std::vector<std::array<Eigen::Index, 2>> clip_ranges;
};

struct Grouping {
  std::vector<int> group_of_video;        // aligned with Corpus::videos
  std::vector<std::string> group_labels;  // group index -> label, sorted
  std::vector<Eigen::Index> group_sizes;  // n_k
};

// Grouped clip-feature corpus. Videos are stored group-contiguously
// (sorted by group label, then video id) so the block structure of the
// group-level Gram matrices is valid regardless of manifest order.
struct Corpus {
  std::vector<ClipFeatures> videos;
  Grouping grouping;
  std::vector<Eigen::Index> offsets;              // N+1 clip offsets into stacked vectors
  std::vector<Eigen::Index> group_video_offsets;  // K+1 video offsets per group
  Eigen::Index dim = 0;
  Eigen::Index total_clips = 0;

  Eigen::Index video_count() const { return static_cast<Eigen::Index>(videos.size()); }
  int group_count() const { return static_cast<int>(grouping.group_labels.size()); }
  Eigen::Index clips_of(Eigen::Index video) const {
    return videos[static_cast<std::size_t>(video)].features.rows();
  }
  Eigen::Index min_clips() const;
  Eigen::Index video_of_clip(Eigen::Index clip) const;
  Eigen::Index video_index(const std::string& video_id) const;  // -1 if absent
};

// Builds a corpus from per-video features and group labels. Sorts videos
// group-contiguously and validates all invariants. Zero-norm feature rows
// are permitted but reported through `warnings`.
Corpus make_corpus(std::vector<ClipFeatures> videos, std::vector<std::string> group_labels,
                   std::vector<std::string>* warnings = nullptr);

// Loads a JSON manifest: { "videos": [ { "id", "group", "features", "clips"? } ] }.
// Feature paths are resolved relative to the manifest's directory.
Corpus load_corpus(const std::filesystem::path& manifest_path,
                   std::vector<std::string>* warnings = nullptr);

// Feature file IO. The binary format stores raw 32-bit reals:
// "VPSF", u32 version=1, u32 rows, u32 cols, rows*cols little-endian floats,
// row-major. Files ending in ".csv" are parsed as one clip per line.
Eigen::MatrixXd read_features(const std::filesystem::path& path);
void write_features(const std::filesystem::path& path, const Eigen::MatrixXd& features);

struct Annotation {
  std::string video_id;
  std::string concept_id;
  std::string annotator_id;
  Eigen::Index clip_index = 0;
  int score = 0;  // 1..3
};

// Per-video, per-concept, per-annotator clip importance scores.
struct AnnotationSet {
  std::vector<Annotation> entries;                   // sorted canonical order
  std::map<std::string, Eigen::Index> clip_counts;   // video id -> T_i

  using TripleKey = std::tuple<std::string, std::string, std::string>;  // (video, concept, annotator)

  // Distinct (video, concept, annotator) triples in sorted order.
  std::vector<TripleKey> triples() const;
  // Dense per-clip score vector for one triple; clips without an entry score 0.
  std::vector<double> score_vector(const std::string& video_id, const std::string& concept_id,
                                   const std::string& annotator_id) const;
  std::vector<std::string> annotator_ids() const;
};

// CSV header: video_id,concept_id,annotator_id,clip_index,score
AnnotationSet load_annotations(const std::filesystem::path& csv_path, const Corpus& corpus);
AnnotationSet load_annotations(const std::filesystem::path& csv_path,
                               const std::map<std::string, Eigen::Index>& clip_counts);

}  // namespace vpsumm
