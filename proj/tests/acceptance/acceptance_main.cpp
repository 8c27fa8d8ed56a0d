// Acceptance gate: every release-blocking property, one [PASS]/[FAIL] line
// each, nonzero exit if anything fails. argv[1] is the CLI binary, used by
// the end-to-end criteria (9, 10).
#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "../unit/oracles.hpp"
#include "vpsumm/cccp.hpp"
#include "vpsumm/eval.hpp"
#include "vpsumm/qp.hpp"
#include "vpsumm/segment.hpp"
#include "vpsumm/synth.hpp"
#include "vpsumm/variance.hpp"

using namespace vpsumm;
namespace vt = vpsumm::testing;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_cli_path;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Criterion {
  std::string name;
  std::function<std::string()> run;  // returns detail text; throws on failure
};

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

std::string format_seconds(double s) {
  std::ostringstream out;
  out.precision(2);
  out << std::fixed << s << " s";
  return out.str();
}

int run_cli(const std::string& args, const std::filesystem::path& stdout_path) {
  const std::string command =
      "'" + g_cli_path + "' " + args + " > '" + stdout_path.string() + "' 2>/dev/null";
  return std::system(command.c_str());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Shared instance generator for criteria 1-3 and 5.
Corpus seeded_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return vt::random_corpus(rng, 4, 2, 10, 8, 2);
}

// --- criterion 1: quadratic-form traces match their definitional sums ----

std::string criterion_traces() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    std::mt19937_64 rng(1000 + static_cast<std::uint64_t>(trial));
    const Corpus corpus = vt::random_corpus(rng, 4, 2, 10, 8, 2);
    const Eigen::Index s =
        std::uniform_int_distribution<Eigen::Index>(1, corpus.min_clips())(rng);
    const GramOperators ops(corpus, Hyperparams{.s = s});
    const Eigen::VectorXd z = vt::random_binary_selection(rng, corpus, s);

    const double pairs[3][2] = {
        {trace_inner_summary(ops, z), vt::oracle_inner_summary(corpus, z, s)},
        {trace_within_group(ops, z), vt::oracle_within_group(corpus, z, s)},
        {trace_between_group(ops, z), vt::oracle_between_group(corpus, z, s)},
    };
    for (const auto& [got, want] : pairs) {
      const double rel = std::abs(got - want) / (1.0 + std::abs(want));
      worst = std::max(worst, rel);
      require(rel <= 1e-9, "trace mismatch " + std::to_string(rel) + " on trial " +
                               std::to_string(trial));
    }
  }
  const double elapsed = seconds_since(start);
  require(elapsed < 10.0, "trace sweep took " + format_seconds(elapsed));
  std::ostringstream detail;
  detail << "200 instances, max rel err " << worst << ", " << format_seconds(elapsed);
  return detail.str();
}

// --- criterion 2: the three scatter terms telescope to z^T (F - A) z ----

std::string criterion_decomposition() {
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    std::mt19937_64 rng(2000 + static_cast<std::uint64_t>(trial));
    const Corpus corpus = vt::random_corpus(rng, 4, 2, 10, 8, 2);
    const Eigen::Index s =
        std::uniform_int_distribution<Eigen::Index>(1, corpus.min_clips())(rng);
    const GramOperators ops(corpus, Hyperparams{.s = s});
    for (const bool binary : {true, false}) {
      const Eigen::VectorXd z = binary ? vt::random_binary_selection(rng, corpus, s)
                                       : vt::random_relaxed_selection(rng, corpus, s);
      const double sum = trace_inner_summary(ops, z) + trace_within_group(ops, z) +
                         trace_between_group(ops, z);
      const double direct = z.dot(ops.apply_f(z)) - z.dot(ops.apply_a(z));
      const double rel = std::abs(sum - direct) / (1.0 + std::abs(direct));
      worst = std::max(worst, rel);
      require(rel <= 1e-9, "decomposition residual " + std::to_string(rel));
    }
  }
  std::ostringstream detail;
  detail << "200 instances, binary and relaxed, max rel err " << worst;
  return detail.str();
}

// --- criterion 3: both pieces of the convex split are PSD ----

std::string criterion_psd() {
  double worst = 0.0;
  int done = 0;
  std::uint64_t seed = 3000;
  while (done < 50) {
    const Corpus corpus = seeded_instance(seed++);
    if (corpus.total_clips > 64) continue;
    ++done;
    const Hyperparams hp{.lambda1 = 0.05, .lambda2 = 0.5, .lambda3 = 0.5, .s = 1};
    const DenseBlocks blocks = dense_blocks(corpus, hp);
    for (const Eigen::MatrixXd& m : {blocks.q1(), blocks.q2()}) {
      const double inf_norm = m.cwiseAbs().rowwise().sum().maxCoeff();
      const double min_eig = vt::min_eigenvalue(m);
      worst = std::min(worst, min_eig);
      require(min_eig >= -1e-8 * std::max(inf_norm, 1.0),
              "eigenvalue " + std::to_string(min_eig) + " below tolerance");
    }
  }
  std::ostringstream detail;
  detail << "50 instances, smallest eigenvalue " << worst;
  return detail.str();
}

// --- criterion 4: capped-simplex projection against the slow oracle ----

std::string criterion_projection() {
  std::mt19937_64 rng(4000);
  std::uniform_int_distribution<Eigen::Index> dim_dist(1, 50);
  std::uniform_real_distribution<double> value_dist(-4.0, 4.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index t = dim_dist(rng);
    Eigen::VectorXd v(t);
    for (Eigen::Index i = 0; i < t; ++i) v[i] = value_dist(rng);
    const double s = static_cast<double>(
        std::uniform_int_distribution<Eigen::Index>(1, t)(rng));

    const Eigen::VectorXd p = project_capped_simplex(v, s);
    require(std::abs(p.sum() - s) <= 1e-9, "sum constraint violated");
    require(p.minCoeff() >= -1e-9 && p.maxCoeff() <= 1.0 + 1e-9, "box constraint violated");
    require(project_capped_simplex(p, s) == p, "projection is not idempotent");
    const double err = (p - vt::oracle_project(v, s)).cwiseAbs().maxCoeff();
    worst = std::max(worst, err);
    require(err <= 1e-8, "oracle deviation " + std::to_string(err));
  }
  std::ostringstream detail;
  detail << "1000 vectors, max coordinate deviation " << worst;
  return detail.str();
}

// --- criterion 5: outer-loop objective history never increases ----

std::string criterion_monotonicity() {
  int steps = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Corpus corpus = seeded_instance(5000 + static_cast<std::uint64_t>(trial));
    CccpOptions options;
    options.seed = static_cast<std::uint64_t>(trial);
    std::vector<std::string> warnings;  // starvation warnings are fine here
    const Summary summary = cccp_solve(corpus, Hyperparams{.s = 2}, options, &warnings);
    require(!summary.objective_history.empty(), "empty objective history");
    for (std::size_t i = 1; i < summary.objective_history.size(); ++i) {
      const double prev = summary.objective_history[i - 1];
      const double cur = summary.objective_history[i];
      require(cur <= prev + 1e-7 * (1.0 + std::abs(prev)),
              "objective rose from " + std::to_string(prev) + " to " + std::to_string(cur));
      ++steps;
    }
  }
  std::ostringstream detail;
  detail << "50 solves, " << steps << " descent steps checked";
  return detail.str();
}

// --- criterion 6: solution quality against exhaustive search ----

std::string criterion_oracle_gap() {
  const auto start = Clock::now();
  int gap_ok = 0;
  int precision_ok = 0;
  const int trials = 50;
  for (int trial = 0; trial < trials; ++trial) {
    SynthParams params;  // defaults: 2 groups x 1 video below, T=6, s=2
    params.videos_per_group = 1;
    params.seed = static_cast<std::uint64_t>(trial);
    const PlantedCorpus dataset = generate_planted(params);
    const Hyperparams hp{.s = params.s};

    const Summary summary = cccp_solve(dataset.corpus, hp, CccpOptions{});
    Eigen::VectorXd z = Eigen::VectorXd::Zero(dataset.corpus.total_clips);
    for (std::size_t v = 0; v < summary.videos.size(); ++v) {
      for (const Eigen::Index clip : summary.videos[v].selected) {
        z[dataset.corpus.offsets[v] + clip] = 1.0;
      }
    }
    const GramOperators ops(dataset.corpus, hp);
    const double rounded = objective(ops, z);
    const BruteForceResult best = brute_force(dataset.corpus, hp);
    if (rounded - best.objective <= 0.10 * std::abs(best.objective)) ++gap_ok;

    Eigen::Index hits = 0;
    Eigen::Index total = 0;
    for (std::size_t v = 0; v < dataset.planted.size(); ++v) {
      const std::set<Eigen::Index> planted(dataset.planted[v].begin(),
                                           dataset.planted[v].end());
      for (const Eigen::Index clip : summary.videos[v].selected) {
        hits += planted.count(clip) ? 1 : 0;
        ++total;
      }
    }
    if (static_cast<double>(hits) / static_cast<double>(total) >= 0.9) ++precision_ok;
  }
  const double elapsed = seconds_since(start);
  require(gap_ok >= 45, "only " + std::to_string(gap_ok) + "/50 runs within 10% of optimum");
  require(precision_ok >= 45,
          "only " + std::to_string(precision_ok) + "/50 runs reach precision 0.9");
  require(elapsed < 60.0, "took " + format_seconds(elapsed));
  std::ostringstream detail;
  detail << "gap within 10%: " << gap_ok << "/50, precision >= 0.9: " << precision_ok
         << "/50, " << format_seconds(elapsed);
  return detail.str();
}

// --- criterion 7: segmentation always tiles with lengths in [32, 112] ----

std::string criterion_segmentation() {
  std::mt19937_64 rng(7000);
  std::uniform_int_distribution<Eigen::Index> total_dist(32, 5000);
  std::uniform_int_distribution<int> cuts_dist(0, 20);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index total = total_dist(rng);
    std::set<Eigen::Index> cut_set;
    const int cuts = cuts_dist(rng);
    std::uniform_int_distribution<Eigen::Index> pos_dist(1, total - 1);
    for (int c = 0; c < cuts; ++c) cut_set.insert(pos_dist(rng));

    const ClipList clips =
        normalize_clips(std::vector<Eigen::Index>(cut_set.begin(), cut_set.end()), total);
    require(!clips.empty(), "no clips produced");
    require(clips.front().begin == 0 && clips.back().end == total, "clips do not tile");
    for (std::size_t i = 0; i < clips.size(); ++i) {
      if (i > 0) require(clips[i].begin == clips[i - 1].end, "gap between clips");
      require(clips[i].length() >= 32 && clips[i].length() <= 112,
              "clip length " + std::to_string(clips[i].length()) + " outside [32, 112]");
    }
  }
  return "1000 fuzzed signals, frame counts 32..5000";
}

// --- criterion 8: ranking metrics are exact ----

std::string criterion_evaluation() {
  // Hand cases pinned to 1e-12.
  const double ap = average_precision({1, 0, 1, 0}, {0.9, 0.8, 0.7, 0.6});
  require(std::abs(ap - (1.0 + 2.0 / 3.0) / 2.0) <= 1e-12, "alternating-label AP is off");
  require(std::abs(average_precision({1, 1, 0, 0}, {0.9, 0.8, 0.7, 0.6}) - 1.0) <= 1e-12,
          "perfect-ranking AP is off");
  require(std::abs(average_precision({0, 0, 0, 1}, {0.9, 0.8, 0.7, 0.6}) - 0.25) <= 1e-12,
          "tail-positive AP is off");
  require(std::abs(average_precision({1, 0, 1, 0, 0, 1}, {0.9, 0.8, 0.7, 0.6, 0.5, 0.4}, 2) -
                   0.5) <= 1e-12,
          "rank-cutoff AP is off");

  // (concepts, annotators, videos per group) = (2, 5, 5) over two groups.
  vt::TempDir dir("vpsumm_accept_eval");
  std::map<std::string, Eigen::Index> counts;
  std::map<std::string, std::string> grouping;
  std::map<std::string, std::vector<double>> predictions;
  std::ofstream csv(dir.path / "ann.csv");
  csv << "video_id,concept_id,annotator_id,clip_index,score\n";
  std::mt19937_64 rng(8000);
  std::uniform_int_distribution<int> score_dist(1, 3);
  std::uniform_real_distribution<double> pred_dist(0.0, 1.0);
  for (int group = 0; group < 2; ++group) {
    for (int video = 0; video < 5; ++video) {
      const std::string id = "g" + std::to_string(group) + "v" + std::to_string(video);
      counts[id] = 6;
      grouping[id] = "group" + std::to_string(group);
      std::vector<double> pred(6);
      for (auto& p : pred) p = pred_dist(rng);
      predictions[id] = pred;
      for (int concept_idx = 0; concept_idx < 2; ++concept_idx) {
        for (int annotator = 0; annotator < 5; ++annotator) {
          for (int clip = 0; clip < 6; ++clip) {
            csv << id << ",c" << concept_idx << ",a" << annotator << "," << clip << ","
                << score_dist(rng) << "\n";
          }
        }
      }
    }
  }
  csv.close();
  const AnnotationSet annotations = load_annotations(dir.path / "ann.csv", counts);

  const EvalReport report = map_report(predictions, annotations, grouping, 5, 0.3);
  std::map<std::string, int> per_group;
  for (const auto& triple : report.triples) ++per_group[grouping.at(triple.video_id)];
  require(per_group.size() == 2, "expected two groups");
  for (const auto& [label, count] : per_group) {
    require(count == 50, label + " has " + std::to_string(count) + " AP terms, wanted 50");
  }
  const double reference = vt::oracle_mean_ap(predictions, annotations, 5, 0.3);
  require(std::abs(report.overall_map - reference) <= 1e-12,
          "mean AP deviates from the triple-loop reference");
  return "hand cases exact, 2x50 AP terms, triple-loop agreement to 1e-12";
}

// --- criterion 9: matrix-free solve at working scale ----

std::string criterion_performance() {
  vt::TempDir dir("vpsumm_accept_perf");
  SynthParams params;
  params.n_groups = 3;
  params.videos_per_group = 5;  // 15 videos
  params.clips_per_video = 200;
  params.dim = 512;
  params.s = 5;
  params.seed = 9;
  write_dataset(dir.path / "ds", generate_planted(params));

  // Total clips (3000) far exceeds the dense-matrix cap (512), so finishing
  // without a cap error proves the solve stays matrix-free.
  const auto out = dir.path / "summary.json";
  const auto start = Clock::now();
  const int status = run_cli("summarize --manifest '" + (dir.path / "ds" / "manifest.json").string() +
                                 "' --s 5 --seed 1 --out '" + out.string() + "'",
                             dir.path / "stdout.json");
  const double elapsed = seconds_since(start);
  require(status == 0, "summarize exited with status " + std::to_string(status));
  require(elapsed < 120.0, "summarize took " + format_seconds(elapsed));

  const nlohmann::json summary = nlohmann::json::parse(read_file(out));
  require(summary["videos"].size() == 15, "expected 15 video summaries");
  for (const auto& video : summary["videos"]) {
    require(video["selected"].size() == 5, "expected 5 clips per video");
    require(video["scores"].size() == 200, "expected full score slices");
  }
  std::ostringstream detail;
  detail << "15 videos x 200 clips, d=512, " << format_seconds(elapsed)
         << " (dense cap 512 < 3000 clips, so any dense path would have failed)";
  return detail.str();
}

// --- criterion 10: byte-identical reruns ----

std::string criterion_determinism() {
  vt::TempDir dir("vpsumm_accept_det");
  SynthParams params;
  params.seed = 10;
  const PlantedCorpus dataset = generate_planted(params);
  write_dataset(dir.path / "ds", dataset);
  const std::string manifest = (dir.path / "ds" / "manifest.json").string();

  const auto summary_a = dir.path / "summary_a.json";
  const auto summary_b = dir.path / "summary_b.json";
  for (const auto& [out, tag] : {std::pair{summary_a, "a"}, {summary_b, "b"}}) {
    const int status = run_cli(
        "summarize --manifest '" + manifest + "' --seed 3 --out '" + out.string() + "'",
        dir.path / ("stdout_" + std::string(tag) + ".json"));
    require(status == 0, "summarize exited with status " + std::to_string(status));
  }
  require(read_file(summary_a) == read_file(summary_b), "summary files differ between runs");

  // Deterministic annotations over the generated corpus.
  const auto csv_path = dir.path / "ann.csv";
  std::ofstream csv(csv_path);
  csv << "video_id,concept_id,annotator_id,clip_index,score\n";
  for (const auto& video : dataset.corpus.videos) {
    for (int concept_idx = 0; concept_idx < 2; ++concept_idx) {
      for (int annotator = 0; annotator < 2; ++annotator) {
        for (Eigen::Index clip = 0; clip < video.features.rows(); ++clip) {
          csv << video.video_id << ",c" << concept_idx << ",a" << annotator << "," << clip
              << "," << 1 + (clip + concept_idx + annotator) % 3 << "\n";
        }
      }
    }
  }
  csv.close();

  const auto report_a = dir.path / "report_a.json";
  const auto report_b = dir.path / "report_b.json";
  for (const auto& [out, tag] : {std::pair{report_a, "a"}, {report_b, "b"}}) {
    const int status = run_cli("evaluate --summary '" + summary_a.string() +
                                   "' --annotations '" + csv_path.string() + "' --out '" +
                                   out.string() + "'",
                               dir.path / ("report_stdout_" + std::string(tag) + ".json"));
    require(status == 0, "evaluate exited with status " + std::to_string(status));
  }
  require(read_file(report_a) == read_file(report_b), "report files differ between runs");
  return "summary and report JSON byte-identical across reruns";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: " << argv[0] << " <path-to-cli-binary>\n";
    return 2;
  }
  g_cli_path = argv[1];

  const std::vector<Criterion> criteria{
      {"trace equivalence", criterion_traces},
      {"scatter decomposition identity", criterion_decomposition},
      {"convex-split positive semidefiniteness", criterion_psd},
      {"capped-simplex projection", criterion_projection},
      {"outer-loop monotonicity", criterion_monotonicity},
      {"solution quality vs exhaustive search", criterion_oracle_gap},
      {"segmentation tiling and length band", criterion_segmentation},
      {"ranking metric exactness", criterion_evaluation},
      {"matrix-free performance at scale", criterion_performance},
      {"byte-identical reruns", criterion_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string verdict = "[PASS]";
    std::string detail;
    try {
      detail = criteria[i].run();
    } catch (const std::exception& e) {
      verdict = "[FAIL]";
      detail = e.what();
      ++failures;
    }
    std::cout << verdict << " " << (i + 1) << ". " << criteria[i].name << ": " << detail
              << std::endl;
  }
  if (failures > 0) {
    std::cout << failures << " of " << criteria.size() << " acceptance criteria failed"
              << std::endl;
    return 1;
  }
  std::cout << "all " << criteria.size() << " acceptance criteria passed" << std::endl;
  return 0;
}
