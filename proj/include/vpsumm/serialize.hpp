#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "vpsumm/cccp.hpp"
#include "vpsumm/eval.hpp"
#include "vpsumm/segment.hpp"

namespace vpsumm {

// Selection summary as JSON:
// { "videos": [ { "id", "selected", "scores" } ], "objective_history": [..],
//   "config": {..} }. The caller supplies the resolved-config echo.
nlohmann::json summary_to_json(const Summary& summary, const nlohmann::json& config);

// What downstream evaluation needs back out of a summary file.
struct LoadedSummary {
  std::map<std::string, std::vector<double>> scores;           // video -> ranking scores
  std::map<std::string, std::vector<Eigen::Index>> selected;   // video -> chosen clips
  std::map<std::string, std::string> groups;                   // from the config echo
  nlohmann::json config;
};
LoadedSummary load_summary(const std::filesystem::path& path);

nlohmann::json report_to_json(const EvalReport& report, const nlohmann::json& config);

nlohmann::json clips_to_json(const std::string& video_id, const ClipList& clips);
ClipList clips_from_json(const std::filesystem::path& path, std::string* video_id = nullptr);

// One fraction per line, values in [0, 1].
DiffSignal read_diff_signal(const std::filesystem::path& path);

// Fixed rendering (2-space indent, trailing newline) so identical inputs
// produce byte-identical files.
std::string canonical_dump(const nlohmann::json& value);
void write_json(const std::filesystem::path& path, const nlohmann::json& value);

}  // namespace vpsumm
