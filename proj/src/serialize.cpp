#include "vpsumm/serialize.hpp"

#include <fstream>

namespace vpsumm {

namespace {

nlohmann::json parse_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError,
                std::string("cannot open ") + what + " '" + path.string() + "'");
  }
  try {
    nlohmann::json value;
    in >> value;
    return value;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::FormatError,
                std::string(what) + " '" + path.string() + "' is not valid JSON: " + e.what());
  }
}

}  // namespace

nlohmann::json summary_to_json(const Summary& summary, const nlohmann::json& config) {
  nlohmann::json out;
  out["videos"] = nlohmann::json::array();
  for (const auto& video : summary.videos) {
    out["videos"].push_back(
        {{"id", video.video_id}, {"selected", video.selected}, {"scores", video.scores}});
  }
  out["objective_history"] = summary.objective_history;
  out["config"] = config;
  return out;
}

LoadedSummary load_summary(const std::filesystem::path& path) {
  const nlohmann::json parsed = parse_file(path, "summary");
  if (!parsed.is_object() || !parsed.contains("videos") || !parsed["videos"].is_array()) {
    throw Error(ErrorCode::FormatError,
                "summary '" + path.string() + "' needs a 'videos' array");
  }
  LoadedSummary loaded;
  loaded.config = parsed.value("config", nlohmann::json::object());
  for (const auto& video : parsed["videos"]) {
    if (!video.contains("id") || !video["id"].is_string() || !video.contains("scores") ||
        !video["scores"].is_array()) {
      throw Error(ErrorCode::FormatError,
                  "summary video entries need string 'id' and array 'scores'");
    }
    const std::string id = video["id"].get<std::string>();
    if (loaded.scores.count(id) != 0) {
      throw Error(ErrorCode::DuplicateKey, "duplicate video id '" + id + "' in summary");
    }
    loaded.scores[id] = video["scores"].get<std::vector<double>>();
    if (video.contains("selected")) {
      loaded.selected[id] = video["selected"].get<std::vector<Eigen::Index>>();
    }
  }
  if (loaded.config.contains("groups") && loaded.config["groups"].is_object()) {
    for (const auto& [id, label] : loaded.config["groups"].items()) {
      loaded.groups[id] = label.get<std::string>();
    }
  }
  return loaded;
}

nlohmann::json report_to_json(const EvalReport& report, const nlohmann::json& config) {
  nlohmann::json out;
  out["group_map"] = report.group_map;
  out["overall_map"] = report.overall_map;
  out["triples"] = nlohmann::json::array();
  for (const auto& triple : report.triples) {
    out["triples"].push_back({{"video_id", triple.video_id},
                              {"concept_id", triple.concept_id},
                              {"annotator_id", triple.annotator_id},
                              {"ap", triple.ap}});
  }
  out["config"] = config;
  return out;
}

nlohmann::json clips_to_json(const std::string& video_id, const ClipList& clips) {
  nlohmann::json out;
  out["video_id"] = video_id;
  out["clips"] = nlohmann::json::array();
  for (const ClipRange& clip : clips) {
    out["clips"].push_back({clip.begin, clip.end});
  }
  return out;
}

ClipList clips_from_json(const std::filesystem::path& path, std::string* video_id) {
  const nlohmann::json parsed = parse_file(path, "clip list");
  if (!parsed.is_object() || !parsed.contains("clips") || !parsed["clips"].is_array()) {
    throw Error(ErrorCode::FormatError, "clip list '" + path.string() + "' needs a 'clips' array");
  }
  if (video_id != nullptr) {
    *video_id = parsed.value("video_id", std::string{});
  }
  ClipList clips;
  for (const auto& entry : parsed["clips"]) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number_integer() ||
        !entry[1].is_number_integer()) {
      throw Error(ErrorCode::FormatError, "clip entries must be [start, end) integer pairs");
    }
    clips.push_back({entry[0].get<Eigen::Index>(), entry[1].get<Eigen::Index>()});
  }
  return clips;
}

DiffSignal read_diff_signal(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open difference signal '" + path.string() + "'");
  }
  DiffSignal signal;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto begin = line.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r\n");
    const std::string token = line.substr(begin, end - begin + 1);
    try {
      std::size_t pos = 0;
      const double value = std::stod(token, &pos);
      if (pos != token.size()) throw std::invalid_argument(token);
      if (!(value >= 0.0 && value <= 1.0)) {
        throw Error(ErrorCode::OutOfRange, "fraction " + token + " outside [0, 1] at " +
                                               path.string() + ":" + std::to_string(lineno));
      }
      signal.push_back(value);
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      throw Error(ErrorCode::FormatError, "bad fraction '" + token + "' at " + path.string() +
                                              ":" + std::to_string(lineno));
    }
  }
  if (signal.empty()) {
    throw Error(ErrorCode::FormatError, "difference signal '" + path.string() + "' is empty");
  }
  return signal;
}

std::string canonical_dump(const nlohmann::json& value) { return value.dump(2) + "\n"; }

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  }
  out << canonical_dump(value);
  if (!out) {
    throw Error(ErrorCode::IoError, "failed writing '" + path.string() + "'");
  }
}

}  // namespace vpsumm
