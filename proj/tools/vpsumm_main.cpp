#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vpsumm/cccp.hpp"
#include "vpsumm/corpus.hpp"
#include "vpsumm/error.hpp"
#include "vpsumm/eval.hpp"
#include "vpsumm/pool.hpp"
#include "vpsumm/segment.hpp"
#include "vpsumm/serialize.hpp"
#include "vpsumm/synth.hpp"
#include "vpsumm/threads.hpp"

namespace {

using nlohmann::json;

void emit_error(const std::string& code, const std::string& message) {
  json error;
  error["error"] = {{"code", code}, {"message", message}};
  std::cerr << error.dump() << "\n";
}

void emit_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

void emit_output(const std::string& out_path, const json& value) {
  if (out_path.empty()) {
    std::cout << vpsumm::canonical_dump(value);
  } else {
    vpsumm::write_json(out_path, value);
  }
}

// Settings shared by every subcommand. Values resolve in the order
// defaults < config file < explicit flags.
struct Common {
  std::string config_path;
  std::string out_path;
  int threads = -1;  // -1: keep the VPSUMM_THREADS/env default

  void add_to(CLI::App& cmd) {
    cmd.add_option("--config", config_path, "JSON file with default flag values");
    cmd.add_option("--out", out_path, "output file (default: stdout)");
    cmd.add_option("--threads", threads, "worker threads (0 = all cores)");
  }

  json load_config() const {
    if (config_path.empty()) return json::object();
    std::ifstream in(config_path);
    if (!in) {
      throw vpsumm::Error(vpsumm::ErrorCode::IoError,
                          "cannot open config '" + config_path + "'");
    }
    try {
      json parsed;
      in >> parsed;
      if (!parsed.is_object()) {
        throw vpsumm::Error(vpsumm::ErrorCode::FormatError,
                            "config '" + config_path + "' must hold a JSON object");
      }
      return parsed;
    } catch (const json::exception& e) {
      throw vpsumm::Error(vpsumm::ErrorCode::FormatError,
                          "config '" + config_path + "' is not valid JSON: " + e.what());
    }
  }

  int apply_threads(const CLI::App& cmd, const json& config) {
    if (cmd.count("--threads") == 0 && config.contains("threads")) {
      threads = config["threads"].get<int>();
    }
    if (threads >= 0) vpsumm::set_thread_count(threads);
    return vpsumm::thread_count();
  }
};

// Flags beat the config file, which beats built-in defaults.
template <typename T>
void from_config(const CLI::App& cmd, const json& config, const std::string& name, T& value) {
  if (cmd.count("--" + name) == 0 && config.contains(name)) {
    value = config[name].get<T>();
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Viewpoint-aware video co-summarization"};
  app.require_subcommand(1);
  int exit_code = 0;

  // --- summarize ---------------------------------------------------------
  auto* summarize = app.add_subcommand("summarize", "select s clips per video from a corpus");
  struct {
    Common common;
    std::string manifest;
    std::int64_t s = 2;
    double lambda1 = 0.05, lambda2 = 0.5, lambda3 = 0.5;
    int max_outer = 50;
    double qp_tol = 1e-6;
    std::uint64_t seed = 0;
  } sm;
  summarize->add_option("--manifest", sm.manifest, "corpus manifest JSON")->required();
  summarize->add_option("--s", sm.s, "clips per summary");
  summarize->add_option("--lambda1", sm.lambda1, "summary-diversity weight");
  summarize->add_option("--lambda2", sm.lambda2, "group-cohesion weight");
  summarize->add_option("--lambda3", sm.lambda3, "group-separation weight");
  summarize->add_option("--max-outer", sm.max_outer, "outer iteration limit");
  summarize->add_option("--qp-tol", sm.qp_tol, "inner-solve gradient-map tolerance");
  summarize->add_option("--seed", sm.seed, "seed for the curvature estimate");
  sm.common.add_to(*summarize);
  summarize->callback([&] {
    const json config_file = sm.common.load_config();
    from_config(*summarize, config_file, "manifest", sm.manifest);
    from_config(*summarize, config_file, "s", sm.s);
    from_config(*summarize, config_file, "lambda1", sm.lambda1);
    from_config(*summarize, config_file, "lambda2", sm.lambda2);
    from_config(*summarize, config_file, "lambda3", sm.lambda3);
    from_config(*summarize, config_file, "max-outer", sm.max_outer);
    from_config(*summarize, config_file, "qp-tol", sm.qp_tol);
    from_config(*summarize, config_file, "seed", sm.seed);
    const int threads = sm.common.apply_threads(*summarize, config_file);

    std::vector<std::string> warnings;
    const vpsumm::Corpus corpus = vpsumm::load_corpus(sm.manifest, &warnings);
    vpsumm::Hyperparams hp;
    hp.lambda1 = sm.lambda1;
    hp.lambda2 = sm.lambda2;
    hp.lambda3 = sm.lambda3;
    hp.s = sm.s;
    vpsumm::CccpOptions options;
    options.max_outer = sm.max_outer;
    options.qp.grad_map_tol = sm.qp_tol;
    options.seed = sm.seed;
    const vpsumm::Summary summary = vpsumm::cccp_solve(corpus, hp, options, &warnings);
    emit_warnings(warnings);

    json groups = json::object();
    for (std::size_t i = 0; i < corpus.videos.size(); ++i) {
      groups[corpus.videos[i].video_id] =
          corpus.grouping.group_labels[static_cast<std::size_t>(
              corpus.grouping.group_of_video[i])];
    }
    const json config = {{"command", "summarize"}, {"manifest", sm.manifest},
                         {"s", sm.s},             {"lambda1", sm.lambda1},
                         {"lambda2", sm.lambda2}, {"lambda3", sm.lambda3},
                         {"max_outer", sm.max_outer}, {"qp_tol", sm.qp_tol},
                         {"seed", sm.seed},       {"threads", threads},
                         {"groups", groups}};
    json out = vpsumm::summary_to_json(summary, config);
    out["converged"] = summary.converged;
    out["outer_iterations"] = summary.outer_iterations;
    emit_output(sm.common.out_path, out);
  });

  // --- evaluate ----------------------------------------------------------
  auto* evaluate = app.add_subcommand("evaluate", "score a summary against annotations");
  struct {
    Common common;
    std::string summary_path;
    std::string annotations_path;
    int k = 5;
    double ratio = 0.3;
  } ev;
  evaluate->add_option("--summary", ev.summary_path, "summary JSON from summarize")->required();
  evaluate->add_option("--annotations", ev.annotations_path, "annotation CSV")->required();
  evaluate->add_option("--k", ev.k, "ranking cutoff (0 = full ranking)");
  evaluate->add_option("--ratio", ev.ratio, "fraction of clips labeled relevant");
  ev.common.add_to(*evaluate);
  evaluate->callback([&] {
    const json config_file = ev.common.load_config();
    from_config(*evaluate, config_file, "summary", ev.summary_path);
    from_config(*evaluate, config_file, "annotations", ev.annotations_path);
    from_config(*evaluate, config_file, "k", ev.k);
    from_config(*evaluate, config_file, "ratio", ev.ratio);
    ev.common.apply_threads(*evaluate, config_file);

    const vpsumm::LoadedSummary loaded = vpsumm::load_summary(ev.summary_path);
    if (loaded.groups.empty()) {
      throw vpsumm::Error(vpsumm::ErrorCode::FormatError,
                          "summary '" + ev.summary_path +
                              "' carries no group labels in its config echo");
    }
    std::map<std::string, Eigen::Index> clip_counts;
    for (const auto& [id, scores] : loaded.scores) {
      clip_counts[id] = static_cast<Eigen::Index>(scores.size());
    }
    const vpsumm::AnnotationSet annotations =
        vpsumm::load_annotations(ev.annotations_path, clip_counts);
    const vpsumm::EvalReport report =
        vpsumm::map_report(loaded.scores, annotations, loaded.groups, ev.k, ev.ratio);
    const json config = {{"command", "evaluate"},
                         {"summary", ev.summary_path},
                         {"annotations", ev.annotations_path},
                         {"k", ev.k},
                         {"ratio", ev.ratio}};
    emit_output(ev.common.out_path, vpsumm::report_to_json(report, config));
  });

  // --- segment -----------------------------------------------------------
  auto* segment = app.add_subcommand("segment", "turn a frame-difference signal into clips");
  struct {
    Common common;
    std::string diff_path;
    std::string video_id;
    double threshold = 0.75;
    std::int64_t min_len = 32;
    std::int64_t max_len = 112;
  } sg;
  segment->add_option("--diff", sg.diff_path, "CSV of per-transition change fractions")
      ->required();
  segment->add_option("--video-id", sg.video_id, "id recorded in the clip list");
  segment->add_option("--threshold", sg.threshold, "change-point threshold");
  segment->add_option("--min-len", sg.min_len, "minimum clip length (frames)");
  segment->add_option("--max-len", sg.max_len, "maximum clip length (frames)");
  sg.common.add_to(*segment);
  segment->callback([&] {
    const json config_file = sg.common.load_config();
    from_config(*segment, config_file, "diff", sg.diff_path);
    from_config(*segment, config_file, "video-id", sg.video_id);
    from_config(*segment, config_file, "threshold", sg.threshold);
    from_config(*segment, config_file, "min-len", sg.min_len);
    from_config(*segment, config_file, "max-len", sg.max_len);
    sg.common.apply_threads(*segment, config_file);

    const vpsumm::DiffSignal signal = vpsumm::read_diff_signal(sg.diff_path);
    const auto boundaries = vpsumm::detect_change_points(signal, sg.threshold);
    const vpsumm::ClipList clips = vpsumm::normalize_clips(
        boundaries, static_cast<Eigen::Index>(signal.size()) + 1, sg.min_len, sg.max_len);
    json out = vpsumm::clips_to_json(sg.video_id, clips);
    out["config"] = {{"command", "segment"},   {"diff", sg.diff_path},
                     {"video_id", sg.video_id}, {"threshold", sg.threshold},
                     {"min_len", sg.min_len},  {"max_len", sg.max_len}};
    emit_output(sg.common.out_path, out);
  });

  // --- pool --------------------------------------------------------------
  auto* pool = app.add_subcommand("pool", "average frame features into clip features");
  struct {
    Common common;
    std::string features_path;
    std::string clips_path;
    std::int64_t stride = 16;
  } pl;
  pool->add_option("--features", pl.features_path, "frame-level feature file")->required();
  pool->add_option("--clips", pl.clips_path, "clip list JSON")->required();
  pool->add_option("--stride", pl.stride, "frames covered by one feature row");
  pool->add_option("--features-out", pl.common.out_path, "pooled feature file to write")
      ->required();
  pool->add_option("--config", pl.common.config_path, "JSON file with default flag values");
  pool->add_option("--threads", pl.common.threads, "worker threads (0 = all cores)");
  pool->callback([&] {
    const json config_file = pl.common.load_config();
    from_config(*pool, config_file, "features", pl.features_path);
    from_config(*pool, config_file, "clips", pl.clips_path);
    from_config(*pool, config_file, "stride", pl.stride);
    pl.common.apply_threads(*pool, config_file);

    const Eigen::MatrixXd frame_features = vpsumm::read_features(pl.features_path);
    std::string video_id;
    const vpsumm::ClipList clips = vpsumm::clips_from_json(pl.clips_path, &video_id);
    std::vector<std::string> warnings;
    const Eigen::MatrixXd pooled =
        vpsumm::pool_clip_features(frame_features, clips, pl.stride, &warnings);
    emit_warnings(warnings);
    vpsumm::write_features(pl.common.out_path, pooled);
    const json status = {{"command", "pool"},
                         {"features", pl.features_path},
                         {"clips", pl.clips_path},
                         {"stride", pl.stride},
                         {"video_id", video_id},
                         {"features_out", pl.common.out_path},
                         {"rows", pooled.rows()},
                         {"cols", pooled.cols()}};
    std::cout << vpsumm::canonical_dump(status);
  });

  // --- synth -------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "generate a planted grouped corpus");
  struct {
    Common common;
    vpsumm::SynthParams params;
    std::string out_dir;
  } sy;
  synth->add_option("--n-groups", sy.params.n_groups, "number of groups");
  synth->add_option("--videos-per-group", sy.params.videos_per_group, "videos in each group");
  synth->add_option("--clips-per-video", sy.params.clips_per_video, "clips in each video");
  synth->add_option("--d", sy.params.dim, "feature dimension");
  synth->add_option("--s", sy.params.s, "planted clips per video");
  synth->add_option("--noise-sigma", sy.params.noise_sigma, "feature noise level");
  synth->add_option("--separation", sy.params.separation,
                    "required pairwise prototype angle (radians)");
  synth->add_option("--seed", sy.params.seed, "generator seed");
  synth->add_option("--out-dir", sy.out_dir, "directory for the dataset")->required();
  synth->add_option("--config", sy.common.config_path, "JSON file with default flag values");
  synth->callback([&] {
    const json config_file = sy.common.load_config();
    from_config(*synth, config_file, "n-groups", sy.params.n_groups);
    from_config(*synth, config_file, "videos-per-group", sy.params.videos_per_group);
    from_config(*synth, config_file, "clips-per-video", sy.params.clips_per_video);
    from_config(*synth, config_file, "d", sy.params.dim);
    from_config(*synth, config_file, "s", sy.params.s);
    from_config(*synth, config_file, "noise-sigma", sy.params.noise_sigma);
    from_config(*synth, config_file, "separation", sy.params.separation);
    from_config(*synth, config_file, "seed", sy.params.seed);

    const vpsumm::PlantedCorpus dataset = vpsumm::generate_planted(sy.params);
    vpsumm::write_dataset(sy.out_dir, dataset);
    const json status = {{"command", "synth"},
                         {"n_groups", sy.params.n_groups},
                         {"videos_per_group", sy.params.videos_per_group},
                         {"clips_per_video", sy.params.clips_per_video},
                         {"d", sy.params.dim},
                         {"s", sy.params.s},
                         {"noise_sigma", sy.params.noise_sigma},
                         {"separation", sy.params.separation},
                         {"seed", sy.params.seed},
                         {"out_dir", sy.out_dir}};
    std::cout << vpsumm::canonical_dump(status);
  });

  // --- oracle ------------------------------------------------------------
  auto* oracle = app.add_subcommand("oracle", "exhaustive exact solution for tiny corpora");
  struct {
    Common common;
    std::string manifest;
    std::int64_t s = 2;
    double lambda1 = 0.05, lambda2 = 0.5, lambda3 = 0.5;
    double cap = 1e6;
  } orc;
  oracle->add_option("--manifest", orc.manifest, "corpus manifest JSON")->required();
  oracle->add_option("--s", orc.s, "clips per summary");
  oracle->add_option("--lambda1", orc.lambda1, "summary-diversity weight");
  oracle->add_option("--lambda2", orc.lambda2, "group-cohesion weight");
  oracle->add_option("--lambda3", orc.lambda3, "group-separation weight");
  oracle->add_option("--cap", orc.cap, "enumeration cap");
  orc.common.add_to(*oracle);
  oracle->callback([&] {
    const json config_file = orc.common.load_config();
    from_config(*oracle, config_file, "manifest", orc.manifest);
    from_config(*oracle, config_file, "s", orc.s);
    from_config(*oracle, config_file, "lambda1", orc.lambda1);
    from_config(*oracle, config_file, "lambda2", orc.lambda2);
    from_config(*oracle, config_file, "lambda3", orc.lambda3);
    from_config(*oracle, config_file, "cap", orc.cap);
    orc.common.apply_threads(*oracle, config_file);

    std::vector<std::string> warnings;
    const vpsumm::Corpus corpus = vpsumm::load_corpus(orc.manifest, &warnings);
    emit_warnings(warnings);
    vpsumm::Hyperparams hp;
    hp.lambda1 = orc.lambda1;
    hp.lambda2 = orc.lambda2;
    hp.lambda3 = orc.lambda3;
    hp.s = orc.s;
    const vpsumm::BruteForceResult result = vpsumm::brute_force(corpus, hp, orc.cap);
    json videos = json::array();
    for (std::size_t i = 0; i < corpus.videos.size(); ++i) {
      videos.push_back({{"id", corpus.videos[i].video_id}, {"selected", result.selected[i]}});
    }
    const json out = {{"videos", videos},
                      {"objective", result.objective},
                      {"config",
                       {{"command", "oracle"}, {"manifest", orc.manifest}, {"s", orc.s},
                        {"lambda1", orc.lambda1}, {"lambda2", orc.lambda2},
                        {"lambda3", orc.lambda3}, {"cap", orc.cap}}}};
    emit_output(orc.common.out_path, out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("invalid_argument", e.what());
    return e.get_exit_code() == 0 ? 1 : e.get_exit_code();
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const vpsumm::Error& e) {
    emit_error(vpsumm::error_code_name(e.code()), e.what());
    return 1;
  } catch (const std::exception& e) {
    emit_error("internal_error", e.what());
    return 1;
  }
}
