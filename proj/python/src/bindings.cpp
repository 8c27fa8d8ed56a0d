#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <utility>

#include "vpsumm/cccp.hpp"
#include "vpsumm/corpus.hpp"
#include "vpsumm/error.hpp"
#include "vpsumm/eval.hpp"
#include "vpsumm/pool.hpp"
#include "vpsumm/qp.hpp"
#include "vpsumm/segment.hpp"
#include "vpsumm/synth.hpp"
#include "vpsumm/variance.hpp"

namespace py = pybind11;

namespace {

vpsumm::ClipList to_clip_list(const std::vector<std::pair<Eigen::Index, Eigen::Index>>& pairs) {
  vpsumm::ClipList clips;
  clips.reserve(pairs.size());
  for (const auto& [begin, end] : pairs) clips.push_back({begin, end});
  return clips;
}

Eigen::VectorXd selection_vector(const vpsumm::Corpus& corpus,
                                 const std::map<std::string, std::vector<Eigen::Index>>& selected,
                                 Eigen::Index s) {
  Eigen::VectorXd z = Eigen::VectorXd::Zero(corpus.total_clips);
  for (const auto& [video_id, clips] : selected) {
    const Eigen::Index v = corpus.video_index(video_id);
    if (v < 0) {
      throw vpsumm::Error(vpsumm::ErrorCode::InvalidArgument,
                          "unknown video id '" + video_id + "'");
    }
    if (static_cast<Eigen::Index>(clips.size()) != s) {
      throw vpsumm::Error(vpsumm::ErrorCode::InvalidArgument,
                          "video '" + video_id + "' needs exactly " + std::to_string(s) +
                              " selected clips");
    }
    for (const Eigen::Index clip : clips) {
      if (clip < 0 || clip >= corpus.clips_of(v)) {
        throw vpsumm::Error(vpsumm::ErrorCode::OutOfRange,
                            "clip index out of range for video '" + video_id + "'");
      }
      z[corpus.offsets[static_cast<std::size_t>(v)] + clip] = 1.0;
    }
  }
  return z;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Viewpoint-aware video co-summarization (C++ core)";

  py::register_exception<vpsumm::Error>(m, "Error", PyExc_RuntimeError);

  py::class_<vpsumm::Hyperparams>(m, "Hyperparams")
      .def(py::init<>())
      .def_readwrite("lambda1", &vpsumm::Hyperparams::lambda1)
      .def_readwrite("lambda2", &vpsumm::Hyperparams::lambda2)
      .def_readwrite("lambda3", &vpsumm::Hyperparams::lambda3)
      .def_readwrite("s", &vpsumm::Hyperparams::s);

  py::class_<vpsumm::VideoSummary>(m, "VideoSummary")
      .def_readonly("video_id", &vpsumm::VideoSummary::video_id)
      .def_readonly("selected", &vpsumm::VideoSummary::selected)
      .def_readonly("scores", &vpsumm::VideoSummary::scores);

  py::class_<vpsumm::Summary>(m, "Summary")
      .def_readonly("videos", &vpsumm::Summary::videos)
      .def_readonly("objective_history", &vpsumm::Summary::objective_history)
      .def_readonly("outer_iterations", &vpsumm::Summary::outer_iterations)
      .def_readonly("converged", &vpsumm::Summary::converged);

  m.def(
      "summarize",
      [](const std::filesystem::path& manifest, Eigen::Index s, double lambda1, double lambda2,
         double lambda3, int max_outer, double qp_tol, std::uint64_t seed) {
        const vpsumm::Corpus corpus = vpsumm::load_corpus(manifest);
        vpsumm::Hyperparams hp;
        hp.lambda1 = lambda1;
        hp.lambda2 = lambda2;
        hp.lambda3 = lambda3;
        hp.s = s;
        vpsumm::CccpOptions options;
        options.max_outer = max_outer;
        options.qp.grad_map_tol = qp_tol;
        options.seed = seed;
        return vpsumm::cccp_solve(corpus, hp, options);
      },
      py::arg("manifest"), py::arg("s"), py::arg("lambda1") = 0.05, py::arg("lambda2") = 0.5,
      py::arg("lambda3") = 0.5, py::arg("max_outer") = 50, py::arg("qp_tol") = 1e-6,
      py::arg("seed") = 0,
      "Select s clips per video from the corpus described by a manifest.");

  m.def(
      "brute_force",
      [](const std::filesystem::path& manifest, Eigen::Index s, double lambda1, double lambda2,
         double lambda3, double cap) {
        const vpsumm::Corpus corpus = vpsumm::load_corpus(manifest);
        vpsumm::Hyperparams hp;
        hp.lambda1 = lambda1;
        hp.lambda2 = lambda2;
        hp.lambda3 = lambda3;
        hp.s = s;
        const vpsumm::BruteForceResult result = vpsumm::brute_force(corpus, hp, cap);
        py::dict out;
        py::dict selected;
        for (std::size_t i = 0; i < corpus.videos.size(); ++i) {
          selected[py::str(corpus.videos[i].video_id)] = result.selected[i];
        }
        out["selected"] = selected;
        out["objective"] = result.objective;
        return out;
      },
      py::arg("manifest"), py::arg("s"), py::arg("lambda1") = 0.05, py::arg("lambda2") = 0.5,
      py::arg("lambda3") = 0.5, py::arg("cap") = 1e6,
      "Exhaustive exact selection for tiny corpora.");

  m.def(
      "trace_report",
      [](const std::filesystem::path& manifest,
         const std::map<std::string, std::vector<Eigen::Index>>& selected, Eigen::Index s,
         double lambda1, double lambda2, double lambda3) {
        const vpsumm::Corpus corpus = vpsumm::load_corpus(manifest);
        vpsumm::Hyperparams hp;
        hp.lambda1 = lambda1;
        hp.lambda2 = lambda2;
        hp.lambda3 = lambda3;
        hp.s = s;
        const vpsumm::GramOperators ops(corpus, hp);
        const Eigen::VectorXd z = selection_vector(corpus, selected, s);
        py::dict out;
        out["inner_summary"] = vpsumm::trace_inner_summary(ops, z);
        out["within_group"] = vpsumm::trace_within_group(ops, z);
        out["between_group"] = vpsumm::trace_between_group(ops, z);
        out["objective"] = vpsumm::objective(ops, z);
        return out;
      },
      py::arg("manifest"), py::arg("selected"), py::arg("s"), py::arg("lambda1") = 0.05,
      py::arg("lambda2") = 0.5, py::arg("lambda3") = 0.5,
      "Variance traces and objective of a binary selection (per-video clip indices).");

  m.def(
      "kmeans_baseline",
      [](const std::filesystem::path& manifest, Eigen::Index s, int clusters,
         std::uint64_t seed) {
        const vpsumm::Corpus corpus = vpsumm::load_corpus(manifest);
        return vpsumm::kmeans_baseline(corpus, s, clusters, seed);
      },
      py::arg("manifest"), py::arg("s"), py::arg("clusters") = 20, py::arg("seed") = 0,
      "Clustering baseline summary over the same manifest format.");

  m.def(
      "load_corpus_info",
      [](const std::filesystem::path& manifest) {
        const vpsumm::Corpus corpus = vpsumm::load_corpus(manifest);
        py::list videos;
        for (std::size_t i = 0; i < corpus.videos.size(); ++i) {
          py::dict video;
          video["id"] = corpus.videos[i].video_id;
          video["group"] = corpus.grouping.group_labels[static_cast<std::size_t>(
              corpus.grouping.group_of_video[i])];
          video["clips"] = corpus.videos[i].features.rows();
          videos.append(video);
        }
        py::dict out;
        out["videos"] = videos;
        out["dim"] = corpus.dim;
        out["total_clips"] = corpus.total_clips;
        return out;
      },
      py::arg("manifest"), "Basic shape information for a corpus manifest.");

  m.def(
      "generate_planted_dataset",
      [](const std::filesystem::path& out_dir, int n_groups, int videos_per_group,
         Eigen::Index clips_per_video, Eigen::Index d, Eigen::Index s, double noise_sigma,
         double separation, std::uint64_t seed) {
        vpsumm::SynthParams params;
        params.n_groups = n_groups;
        params.videos_per_group = videos_per_group;
        params.clips_per_video = clips_per_video;
        params.dim = d;
        params.s = s;
        params.noise_sigma = noise_sigma;
        params.separation = separation;
        params.seed = seed;
        const vpsumm::PlantedCorpus dataset = vpsumm::generate_planted(params);
        vpsumm::write_dataset(out_dir, dataset);
        py::dict planted;
        for (std::size_t i = 0; i < dataset.corpus.videos.size(); ++i) {
          planted[py::str(dataset.corpus.videos[i].video_id)] = dataset.planted[i];
        }
        return planted;
      },
      py::arg("out_dir"), py::arg("n_groups") = 2, py::arg("videos_per_group") = 2,
      py::arg("clips_per_video") = 6, py::arg("d") = 16, py::arg("s") = 2,
      py::arg("noise_sigma") = 0.05, py::arg("separation") = 0.8, py::arg("seed") = 0,
      "Write a seeded planted corpus (manifest + features + ground truth) and "
      "return the planted clip indices per video.");

  m.def("project_capped_simplex", &vpsumm::project_capped_simplex, py::arg("v"), py::arg("s"),
        "Euclidean projection onto {z : sum(z) = s, 0 <= z <= 1}.");

  m.def("ground_truth_from_scores", &vpsumm::ground_truth_from_scores, py::arg("scores"),
        py::arg("ratio") = 0.3, "Binary labels marking the top ceil(ratio*T) clips.");

  m.def("average_precision", &vpsumm::average_precision, py::arg("labels"), py::arg("scores"),
        py::arg("k") = std::nullopt, "AP of a score ranking against binary labels.");

  m.def("detect_change_points", &vpsumm::detect_change_points, py::arg("signal"),
        py::arg("threshold") = 0.75, "Cut positions where the change fraction exceeds the threshold.");

  m.def(
      "normalize_clips",
      [](const std::vector<Eigen::Index>& boundaries, Eigen::Index total_frames,
         Eigen::Index min_len, Eigen::Index max_len) {
        std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
        for (const vpsumm::ClipRange& clip :
             vpsumm::normalize_clips(boundaries, total_frames, min_len, max_len)) {
          out.emplace_back(clip.begin, clip.end);
        }
        return out;
      },
      py::arg("boundaries"), py::arg("total_frames"), py::arg("min_len") = 32,
      py::arg("max_len") = 112, "Clips tiling [0, total_frames) with lengths inside the band.");

  m.def(
      "pool_clip_features",
      [](const Eigen::MatrixXd& frame_features,
         const std::vector<std::pair<Eigen::Index, Eigen::Index>>& clips, Eigen::Index stride) {
        return vpsumm::pool_clip_features(frame_features, to_clip_list(clips), stride);
      },
      py::arg("frame_features"), py::arg("clips"), py::arg("stride") = 16,
      "Mean-pool frame features per clip, then l2-normalize.");
}
