#include "vpsumm/synth.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <string>

#include <json.hpp>

namespace vpsumm {

namespace {

std::string zero_pad(int value, int width) {
  std::string text = std::to_string(value);
  while (static_cast<int>(text.size()) < width) text.insert(text.begin(), '0');
  return text;
}

}  // namespace

PlantedCorpus generate_planted(const SynthParams& params) {
  if (params.n_groups < 1 || params.videos_per_group < 1) {
    throw Error(ErrorCode::InvalidArgument, "need at least one group and one video per group");
  }
  if (params.s < 1) {
    throw Error(ErrorCode::InvalidArgument, "summary length s must be at least 1");
  }
  if (params.clips_per_video < params.s + 2) {
    throw Error(ErrorCode::InvalidArgument,
                "clips_per_video must be at least s + 2 to leave room for shared clips");
  }
  if (params.separation <= 0.0 || params.separation > std::asin(1.0) + 1e-12) {
    throw Error(ErrorCode::OutOfRange,
                "separation must lie in (0, pi/2]; orthonormal prototypes realize pi/2");
  }
  const Eigen::Index n_shared = params.clips_per_video - params.s;
  const Eigen::Index n_prototypes = static_cast<Eigen::Index>(params.n_groups) + n_shared;
  if (params.dim < n_prototypes) {
    throw Error(ErrorCode::InvalidArgument,
                "dim=" + std::to_string(params.dim) + " too small to host " +
                    std::to_string(n_prototypes) + " orthonormal prototype directions");
  }
  if (!std::isfinite(params.noise_sigma) || params.noise_sigma < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "noise_sigma must be finite and non-negative");
  }

  std::mt19937_64 rng(params.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  // Orthonormal prototype rows: first n_groups are the per-group
  // discriminative directions, the rest are shared across all groups.
  Eigen::MatrixXd raw(params.dim, n_prototypes);
  for (Eigen::Index c = 0; c < raw.cols(); ++c) {
    for (Eigen::Index r = 0; r < raw.rows(); ++r) raw(r, c) = normal(rng);
  }
  const Eigen::MatrixXd basis =
      Eigen::HouseholderQR<Eigen::MatrixXd>(raw).householderQ() *
      Eigen::MatrixXd::Identity(params.dim, n_prototypes);

  PlantedCorpus out;
  out.params = params;
  std::vector<ClipFeatures> videos;
  std::vector<std::string> group_labels;
  const int group_width = static_cast<int>(std::to_string(params.n_groups).size());
  const int video_width =
      static_cast<int>(std::to_string(params.n_groups * params.videos_per_group).size());

  int video_counter = 0;
  for (int g = 0; g < params.n_groups; ++g) {
    for (int v = 0; v < params.videos_per_group; ++v, ++video_counter) {
      ClipFeatures video;
      video.video_id = "video_" + zero_pad(video_counter, video_width);
      video.features.resize(params.clips_per_video, params.dim);

      // Seeded random positions for the discriminative clips.
      std::vector<Eigen::Index> positions(static_cast<std::size_t>(params.clips_per_video));
      std::iota(positions.begin(), positions.end(), Eigen::Index{0});
      for (Eigen::Index i = 0; i < params.s; ++i) {
        std::uniform_int_distribution<Eigen::Index> pick(i, params.clips_per_video - 1);
        std::swap(positions[static_cast<std::size_t>(i)],
                  positions[static_cast<std::size_t>(pick(rng))]);
      }
      std::vector<Eigen::Index> planted(positions.begin(), positions.begin() + params.s);
      std::sort(planted.begin(), planted.end());

      // Each non-planted slot gets its own shared prototype, so no two
      // clips inside one video duplicate each other.
      std::vector<Eigen::Index> shared_slots(positions.begin() + params.s, positions.end());
      std::sort(shared_slots.begin(), shared_slots.end());

      for (Eigen::Index clip = 0; clip < params.clips_per_video; ++clip) {
        Eigen::VectorXd base;
        if (std::binary_search(planted.begin(), planted.end(), clip)) {
          base = basis.col(g);
        } else {
          const auto slot = std::lower_bound(shared_slots.begin(), shared_slots.end(), clip) -
                            shared_slots.begin();
          base = basis.col(static_cast<Eigen::Index>(params.n_groups) + slot);
        }
        for (Eigen::Index c = 0; c < params.dim; ++c) {
          base[c] += params.noise_sigma * normal(rng);
        }
        const double norm = base.norm();
        video.features.row(clip) = (norm > 0.0 ? (base / norm) : base).transpose();
      }
      videos.push_back(std::move(video));
      group_labels.push_back("group_" + zero_pad(g, group_width));
      out.planted.push_back(std::move(planted));
    }
  }

  // Video ids are generated in group order, so make_corpus keeps the input
  // order and the planted lists stay aligned.
  out.corpus = make_corpus(std::move(videos), std::move(group_labels));
  return out;
}

void write_dataset(const std::filesystem::path& dir, const PlantedCorpus& dataset) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::IoError, "cannot create directory '" + dir.string() + "'");
  }

  nlohmann::json manifest;
  manifest["videos"] = nlohmann::json::array();
  nlohmann::json planted;
  for (std::size_t i = 0; i < dataset.corpus.videos.size(); ++i) {
    const auto& video = dataset.corpus.videos[i];
    const std::string feature_name = video.video_id + ".vpsf";
    write_features(dir / feature_name, video.features);
    manifest["videos"].push_back(
        {{"id", video.video_id},
         {"group",
          dataset.corpus.grouping
              .group_labels[static_cast<std::size_t>(dataset.corpus.grouping.group_of_video[i])]},
         {"features", feature_name}});
    planted[video.video_id] = dataset.planted[i];
  }

  std::ofstream manifest_out(dir / "manifest.json");
  manifest_out << manifest.dump(2) << "\n";
  std::ofstream planted_out(dir / "planted.json");
  planted_out << planted.dump(2) << "\n";
  if (!manifest_out || !planted_out) {
    throw Error(ErrorCode::IoError, "failed writing dataset files under '" + dir.string() + "'");
  }
}

}  // namespace vpsumm
