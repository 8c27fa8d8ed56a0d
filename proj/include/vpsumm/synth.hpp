#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "vpsumm/corpus.hpp"

namespace vpsumm {

struct SynthParams {
  int n_groups = 2;
  int videos_per_group = 2;
  Eigen::Index clips_per_video = 6;
  Eigen::Index dim = 16;
  Eigen::Index s = 2;
  double noise_sigma = 0.05;
  // Lower bound on the pairwise prototype angle (radians). Prototypes are
  // orthonormal, so the realized angle is pi/2; values above that are
  // unsatisfiable and rejected.
  double separation = 0.8;
  std::uint64_t seed = 0;
};

struct PlantedCorpus {
  Corpus corpus;
  // Per video (corpus order): the s clip indices carrying the group's
  // discriminative prototype. Everything else carries prototypes shared by
  // all groups, so only these clips separate the groups.
  std::vector<std::vector<Eigen::Index>> planted;
  SynthParams params;
};

// Seeded generator of grouped corpora with known discriminative clips.
// Each group gets one prototype direction; each video hosts s clips near
// its group's prototype at seeded random positions, and every remaining
// clip sits near a distinct corpus-wide shared prototype. All features are
// unit norm. Requires dim >= n_groups + (clips_per_video - s) so the
// prototypes can be orthonormal.
PlantedCorpus generate_planted(const SynthParams& params);

// Writes manifest.json, one feature file per video, and planted.json
// (ground-truth clip indices) into `dir`.
void write_dataset(const std::filesystem::path& dir, const PlantedCorpus& dataset);

}  // namespace vpsumm
