#include "vpsumm/corpus.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace vpsumm {

namespace {

void warn(std::vector<std::string>* warnings, const std::string& message) {
  if (warnings != nullptr) {
    warnings->push_back(message);
  } else {
    std::cerr << "warning: " << message << "\n";
  }
}

void check_finite(const Eigen::MatrixXd& features, const std::string& video_id) {
  if (!features.allFinite()) {
    throw Error(ErrorCode::NonFiniteValue,
                "features of video '" + video_id + "' contain NaN or infinity");
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    fields.emplace_back();
  }
  return fields;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

// Whole-token integer parse; rejects trailing characters ("1.5", "2x").
long long parse_integer_field(const std::string& token) {
  std::size_t pos = 0;
  const long long value = std::stoll(token, &pos);
  if (pos != token.size()) throw std::invalid_argument("trailing characters");
  return value;
}

Eigen::MatrixXd read_features_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open feature file '" + path.string() + "'");
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    for (const auto& field : split_csv_line(line)) {
      const std::string token = trim(field);
      try {
        std::size_t pos = 0;
        row.push_back(std::stod(token, &pos));
        if (pos != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw Error(ErrorCode::FormatError, "bad numeric value '" + token + "' at " +
                                                path.string() + ":" + std::to_string(lineno));
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::FormatError,
                  "ragged row at " + path.string() + ":" + std::to_string(lineno));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw Error(ErrorCode::FormatError, "feature file '" + path.string() + "' is empty");
  }
  Eigen::MatrixXd features(static_cast<Eigen::Index>(rows.size()),
                           static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index r = 0; r < features.rows(); ++r) {
    for (Eigen::Index c = 0; c < features.cols(); ++c) {
      features(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
  }
  return features;
}

Eigen::MatrixXd read_features_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open feature file '" + path.string() + "'");
  }
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "VPSF", 4) != 0) {
    throw Error(ErrorCode::FormatError, "'" + path.string() + "' is not a feature file");
  }
  auto read_u32 = [&](const char* what) {
    std::uint32_t v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
      throw Error(ErrorCode::FormatError,
                  "truncated header (" + std::string(what) + ") in '" + path.string() + "'");
    }
    return v;
  };
  const std::uint32_t version = read_u32("version");
  if (version != 1) {
    throw Error(ErrorCode::FormatError, "unsupported feature file version " +
                                            std::to_string(version) + " in '" + path.string() + "'");
  }
  const std::uint32_t rows = read_u32("rows");
  const std::uint32_t cols = read_u32("cols");
  if (rows == 0 || cols == 0) {
    throw Error(ErrorCode::FormatError, "empty feature matrix in '" + path.string() + "'");
  }
  std::vector<float> buffer(static_cast<std::size_t>(rows) * cols);
  if (!in.read(reinterpret_cast<char*>(buffer.data()),
               static_cast<std::streamsize>(buffer.size() * sizeof(float)))) {
    throw Error(ErrorCode::FormatError, "truncated payload in '" + path.string() + "'");
  }
  Eigen::MatrixXd features(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::uint32_t r = 0; r < rows; ++r) {
    for (std::uint32_t c = 0; c < cols; ++c) {
      features(r, c) = static_cast<double>(buffer[static_cast<std::size_t>(r) * cols + c]);
    }
  }
  return features;
}

}  // namespace

Eigen::Index Corpus::min_clips() const {
  Eigen::Index m = videos.empty() ? 0 : videos.front().features.rows();
  for (const auto& v : videos) m = std::min(m, v.features.rows());
  return m;
}

Eigen::Index Corpus::video_of_clip(Eigen::Index clip) const {
  const auto it = std::upper_bound(offsets.begin(), offsets.end(), clip);
  return static_cast<Eigen::Index>(it - offsets.begin()) - 1;
}

Eigen::Index Corpus::video_index(const std::string& video_id) const {
  for (std::size_t i = 0; i < videos.size(); ++i) {
    if (videos[i].video_id == video_id) return static_cast<Eigen::Index>(i);
  }
  return -1;
}

Corpus make_corpus(std::vector<ClipFeatures> videos, std::vector<std::string> group_labels,
                   std::vector<std::string>* warnings) {
  if (videos.empty()) {
    throw Error(ErrorCode::InvalidArgument, "corpus needs at least one video");
  }
  if (videos.size() != group_labels.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "got " + std::to_string(videos.size()) + " videos but " +
                    std::to_string(group_labels.size()) + " group labels");
  }

  // Sort videos group-contiguously; ties broken by video id so the layout
  // is deterministic regardless of input order.
  std::vector<std::size_t> order(videos.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (group_labels[a] != group_labels[b]) return group_labels[a] < group_labels[b];
    return videos[a].video_id < videos[b].video_id;
  });

  Corpus corpus;
  corpus.videos.reserve(videos.size());
  std::vector<std::string> sorted_labels;
  sorted_labels.reserve(videos.size());
  for (std::size_t i : order) {
    corpus.videos.push_back(std::move(videos[i]));
    sorted_labels.push_back(std::move(group_labels[i]));
  }

  std::set<std::string> seen_ids;
  corpus.dim = corpus.videos.front().features.cols();
  corpus.offsets.push_back(0);
  for (const auto& video : corpus.videos) {
    if (video.video_id.empty()) {
      throw Error(ErrorCode::InvalidArgument, "video id must be non-empty");
    }
    if (!seen_ids.insert(video.video_id).second) {
      throw Error(ErrorCode::DuplicateKey, "duplicate video id '" + video.video_id + "'");
    }
    if (video.features.rows() == 0) {
      throw Error(ErrorCode::InvalidArgument, "video '" + video.video_id + "' has no clips");
    }
    if (video.features.cols() != corpus.dim) {
      throw Error(ErrorCode::DimensionMismatch,
                  "video '" + video.video_id + "' has feature dimension " +
                      std::to_string(video.features.cols()) + ", expected " +
                      std::to_string(corpus.dim));
    }
    check_finite(video.features, video.video_id);
    for (Eigen::Index r = 0; r < video.features.rows(); ++r) {
      if (video.features.row(r).norm() == 0.0) {
        warn(warnings, "video '" + video.video_id + "' clip " + std::to_string(r) +
                           " has an all-zero feature vector");
      }
    }
    corpus.offsets.push_back(corpus.offsets.back() + video.features.rows());
  }
  corpus.total_clips = corpus.offsets.back();

  corpus.grouping.group_of_video.resize(corpus.videos.size());
  corpus.group_video_offsets.push_back(0);
  for (std::size_t i = 0; i < corpus.videos.size(); ++i) {
    if (corpus.grouping.group_labels.empty() ||
        corpus.grouping.group_labels.back() != sorted_labels[i]) {
      corpus.grouping.group_labels.push_back(sorted_labels[i]);
      corpus.grouping.group_sizes.push_back(0);
      corpus.group_video_offsets.push_back(static_cast<Eigen::Index>(i));
    }
    corpus.grouping.group_of_video[i] = static_cast<int>(corpus.grouping.group_labels.size()) - 1;
    corpus.grouping.group_sizes.back() += 1;
    corpus.group_video_offsets.back() = static_cast<Eigen::Index>(i) + 1;
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& manifest_path,
                   std::vector<std::string>* warnings) {
  std::ifstream in(manifest_path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open manifest '" + manifest_path.string() + "'");
  }
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::FormatError,
                "manifest '" + manifest_path.string() + "' is not valid JSON: " + e.what());
  }
  if (!manifest.is_object() || !manifest.contains("videos") || !manifest["videos"].is_array() ||
      manifest["videos"].empty()) {
    throw Error(ErrorCode::FormatError,
                "manifest '" + manifest_path.string() + "' needs a non-empty 'videos' array");
  }

  const auto base = manifest_path.has_parent_path() ? manifest_path.parent_path()
                                                    : std::filesystem::path(".");
  std::vector<ClipFeatures> videos;
  std::vector<std::string> group_labels;
  for (const auto& entry : manifest["videos"]) {
    for (const char* key : {"id", "group", "features"}) {
      if (!entry.contains(key) || !entry[key].is_string()) {
        throw Error(ErrorCode::FormatError,
                    "manifest video entry is missing string field '" + std::string(key) + "'");
      }
    }
    ClipFeatures video;
    video.video_id = entry["id"].get<std::string>();
    std::filesystem::path feature_path = entry["features"].get<std::string>();
    if (feature_path.is_relative()) feature_path = base / feature_path;
    video.features = read_features(feature_path);
    if (entry.contains("clips")) {
      if (!entry["clips"].is_array()) {
        throw Error(ErrorCode::FormatError,
                    "'clips' of video '" + video.video_id + "' must be an array");
      }
      for (const auto& range : entry["clips"]) {
        if (!range.is_array() || range.size() != 2 || !range[0].is_number_integer() ||
            !range[1].is_number_integer()) {
          throw Error(ErrorCode::FormatError, "clip ranges of video '" + video.video_id +
                                                  "' must be [begin, end) integer pairs");
        }
        video.clip_ranges.push_back(
            {range[0].get<Eigen::Index>(), range[1].get<Eigen::Index>()});
      }
      if (static_cast<Eigen::Index>(video.clip_ranges.size()) != video.features.rows()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "video '" + video.video_id + "' lists " +
                        std::to_string(video.clip_ranges.size()) + " clip ranges but has " +
                        std::to_string(video.features.rows()) + " feature rows");
      }
    }
    group_labels.push_back(entry["group"].get<std::string>());
    videos.push_back(std::move(video));
  }
  return make_corpus(std::move(videos), std::move(group_labels), warnings);
}

Eigen::MatrixXd read_features(const std::filesystem::path& path) {
  Eigen::MatrixXd features =
      path.extension() == ".csv" ? read_features_csv(path) : read_features_binary(path);
  if (!features.allFinite()) {
    throw Error(ErrorCode::NonFiniteValue,
                "feature file '" + path.string() + "' contains NaN or infinity");
  }
  return features;
}

void write_features(const std::filesystem::path& path, const Eigen::MatrixXd& features) {
  if (features.rows() == 0 || features.cols() == 0) {
    throw Error(ErrorCode::InvalidArgument, "refusing to write an empty feature matrix");
  }
  if (path.extension() == ".csv") {
    std::ofstream out(path);
    if (!out) {
      throw Error(ErrorCode::IoError, "cannot write feature file '" + path.string() + "'");
    }
    out.precision(9);
    for (Eigen::Index r = 0; r < features.rows(); ++r) {
      for (Eigen::Index c = 0; c < features.cols(); ++c) {
        if (c > 0) out << ',';
        out << features(r, c);
      }
      out << '\n';
    }
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write feature file '" + path.string() + "'");
  }
  out.write("VPSF", 4);
  const std::uint32_t version = 1;
  const std::uint32_t rows = static_cast<std::uint32_t>(features.rows());
  const std::uint32_t cols = static_cast<std::uint32_t>(features.cols());
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  out.write(reinterpret_cast<const char*>(&cols), sizeof cols);
  std::vector<float> buffer(static_cast<std::size_t>(rows) * cols);
  for (std::uint32_t r = 0; r < rows; ++r) {
    for (std::uint32_t c = 0; c < cols; ++c) {
      buffer[static_cast<std::size_t>(r) * cols + c] = static_cast<float>(features(r, c));
    }
  }
  out.write(reinterpret_cast<const char*>(buffer.data()),
            static_cast<std::streamsize>(buffer.size() * sizeof(float)));
  if (!out) {
    throw Error(ErrorCode::IoError, "failed writing feature file '" + path.string() + "'");
  }
}

std::vector<AnnotationSet::TripleKey> AnnotationSet::triples() const {
  std::vector<TripleKey> keys;
  for (const auto& a : entries) {
    TripleKey key{a.video_id, a.concept_id, a.annotator_id};
    if (keys.empty() || keys.back() != key) keys.push_back(std::move(key));
  }
  return keys;
}

std::vector<double> AnnotationSet::score_vector(const std::string& video_id,
                                                const std::string& concept_id,
                                                const std::string& annotator_id) const {
  const auto it = clip_counts.find(video_id);
  if (it == clip_counts.end()) {
    throw Error(ErrorCode::InvalidArgument, "unknown video id '" + video_id + "'");
  }
  std::vector<double> scores(static_cast<std::size_t>(it->second), 0.0);
  for (const auto& a : entries) {
    if (a.video_id == video_id && a.concept_id == concept_id && a.annotator_id == annotator_id) {
      scores[static_cast<std::size_t>(a.clip_index)] = static_cast<double>(a.score);
    }
  }
  return scores;
}

std::vector<std::string> AnnotationSet::annotator_ids() const {
  std::set<std::string> ids;
  for (const auto& a : entries) ids.insert(a.annotator_id);
  return {ids.begin(), ids.end()};
}

AnnotationSet load_annotations(const std::filesystem::path& csv_path, const Corpus& corpus) {
  std::map<std::string, Eigen::Index> clip_counts;
  for (const auto& video : corpus.videos) {
    clip_counts[video.video_id] = video.features.rows();
  }
  return load_annotations(csv_path, clip_counts);
}

AnnotationSet load_annotations(const std::filesystem::path& csv_path,
                               const std::map<std::string, Eigen::Index>& clip_counts) {
  std::ifstream in(csv_path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open annotation file '" + csv_path.string() + "'");
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::FormatError, "annotation file '" + csv_path.string() + "' is empty");
  }
  const std::string expected_header = "video_id,concept_id,annotator_id,clip_index,score";
  if (trim(line) != expected_header) {
    throw Error(ErrorCode::FormatError, "annotation file '" + csv_path.string() +
                                            "' must start with header '" + expected_header + "'");
  }

  AnnotationSet set;
  set.clip_counts = clip_counts;
  std::set<std::tuple<std::string, std::string, std::string, Eigen::Index>> seen;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 5) {
      throw Error(ErrorCode::FormatError, "expected 5 fields at " + csv_path.string() + ":" +
                                              std::to_string(lineno) + ", got " +
                                              std::to_string(fields.size()));
    }
    Annotation a;
    a.video_id = trim(fields[0]);
    a.concept_id = trim(fields[1]);
    a.annotator_id = trim(fields[2]);
    try {
      a.clip_index = static_cast<Eigen::Index>(parse_integer_field(trim(fields[3])));
      a.score = static_cast<int>(parse_integer_field(trim(fields[4])));
    } catch (const std::exception&) {
      throw Error(ErrorCode::FormatError, "bad numeric field at " + csv_path.string() + ":" +
                                              std::to_string(lineno));
    }
    const auto it = clip_counts.find(a.video_id);
    if (it == clip_counts.end()) {
      throw Error(ErrorCode::InvalidArgument, "unknown video id '" + a.video_id + "' at " +
                                                  csv_path.string() + ":" +
                                                  std::to_string(lineno));
    }
    if (a.clip_index < 0 || a.clip_index >= it->second) {
      throw Error(ErrorCode::OutOfRange, "clip index " + std::to_string(a.clip_index) +
                                             " out of range for video '" + a.video_id + "' at " +
                                             csv_path.string() + ":" + std::to_string(lineno));
    }
    if (a.score < 1 || a.score > 3) {
      throw Error(ErrorCode::OutOfRange, "score " + std::to_string(a.score) +
                                             " outside 1..3 at " + csv_path.string() + ":" +
                                             std::to_string(lineno));
    }
    if (!seen.insert({a.video_id, a.concept_id, a.annotator_id, a.clip_index}).second) {
      throw Error(ErrorCode::DuplicateKey,
                  "duplicate annotation for (video '" + a.video_id + "', concept '" +
                      a.concept_id + "', annotator '" + a.annotator_id + "', clip " +
                      std::to_string(a.clip_index) + ") at " + csv_path.string() + ":" +
                      std::to_string(lineno));
    }
    set.entries.push_back(std::move(a));
  }
  std::sort(set.entries.begin(), set.entries.end(), [](const Annotation& x, const Annotation& y) {
    return std::tie(x.video_id, x.concept_id, x.annotator_id, x.clip_index) <
           std::tie(y.video_id, y.concept_id, y.annotator_id, y.clip_index);
  });
  return set;
}

}  // namespace vpsumm
