#include "vpsumm/segment.hpp"

#include <string>

namespace vpsumm {

DiffSignal frame_diff_fraction(const FrameSequence& frames_rgb, const FrameSequence& frames_hsv,
                               double pixel_tol) {
  if (frames_rgb.size() != frames_hsv.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "RGB and HSV sequences have different frame counts");
  }
  if (frames_rgb.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "need at least two frames to compute differences");
  }
  for (std::size_t f = 0; f < frames_rgb.size(); ++f) {
    if (frames_rgb[f].rows() != frames_rgb[0].rows() ||
        frames_rgb[f].cols() != frames_rgb[0].cols() ||
        frames_hsv[f].rows() != frames_rgb[0].rows() ||
        frames_hsv[f].cols() != frames_rgb[0].cols()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "frame " + std::to_string(f) + " does not match the first frame's shape");
    }
  }
  const Eigen::Index pixels = frames_rgb[0].rows();
  if (pixels == 0) {
    throw Error(ErrorCode::InvalidArgument, "frames have no pixels");
  }

  DiffSignal signal(frames_rgb.size() - 1);
  for (std::size_t f = 0; f + 1 < frames_rgb.size(); ++f) {
    const Eigen::VectorXd rgb_max =
        (frames_rgb[f + 1] - frames_rgb[f]).cwiseAbs().rowwise().maxCoeff();
    const Eigen::VectorXd hsv_max =
        (frames_hsv[f + 1] - frames_hsv[f]).cwiseAbs().rowwise().maxCoeff();
    Eigen::Index changed = 0;
    for (Eigen::Index p = 0; p < pixels; ++p) {
      if (rgb_max[p] > pixel_tol || hsv_max[p] > pixel_tol) ++changed;
    }
    signal[f] = static_cast<double>(changed) / static_cast<double>(pixels);
  }
  return signal;
}

std::vector<Eigen::Index> detect_change_points(const DiffSignal& signal, double threshold) {
  if (threshold <= 0.0 || threshold > 1.0) {
    throw Error(ErrorCode::OutOfRange, "threshold must lie in (0, 1]");
  }
  std::vector<Eigen::Index> boundaries;
  for (std::size_t t = 0; t < signal.size(); ++t) {
    if (signal[t] < 0.0 || signal[t] > 1.0) {
      throw Error(ErrorCode::OutOfRange,
                  "difference fraction at index " + std::to_string(t) + " outside [0, 1]");
    }
    if (signal[t] > threshold) {
      boundaries.push_back(static_cast<Eigen::Index>(t) + 1);
    }
  }
  return boundaries;
}

ClipList normalize_clips(const std::vector<Eigen::Index>& boundaries, Eigen::Index total_frames,
                         Eigen::Index min_len, Eigen::Index max_len) {
  if (min_len < 1 || max_len < min_len) {
    throw Error(ErrorCode::InvalidArgument, "need 1 <= min_len <= max_len");
  }
  // Splitting a clip of length max_len+1 yields parts of about half its
  // size; this bound keeps every part at or above min_len.
  if (max_len < 2 * min_len - 1) {
    throw Error(ErrorCode::InvalidArgument,
                "max_len must be at least 2*min_len - 1 so split parts stay in band");
  }
  if (total_frames < min_len) {
    throw Error(ErrorCode::OutOfRange, "total_frames=" + std::to_string(total_frames) +
                                           " is below the minimum clip length " +
                                           std::to_string(min_len));
  }
  ClipList raw;
  Eigen::Index start = 0;
  for (const Eigen::Index b : boundaries) {
    if (b <= start || b >= total_frames) {
      throw Error(ErrorCode::InvalidArgument,
                  "boundaries must be strictly increasing inside (0, total_frames)");
    }
    raw.push_back({start, b});
    start = b;
  }
  raw.push_back({start, total_frames});

  // Forward merge: accumulate each short clip into its successor, so only
  // the final clip can still be short afterwards.
  ClipList merged;
  Eigen::Index acc_begin = raw.front().begin;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const Eigen::Index acc_end = raw[i].end;
    if (acc_end - acc_begin >= min_len) {
      merged.push_back({acc_begin, acc_end});
      acc_begin = acc_end;
    }
  }
  if (acc_begin < total_frames) {
    // Trailing short clip merges backward into the previous one.
    if (merged.empty()) {
      merged.push_back({0, total_frames});
    } else {
      merged.back().end = total_frames;
    }
  }

  ClipList out;
  for (const ClipRange& clip : merged) {
    const Eigen::Index len = clip.length();
    if (len <= max_len) {
      out.push_back(clip);
      continue;
    }
    const Eigen::Index parts = (len + max_len - 1) / max_len;
    const Eigen::Index base = len / parts;
    const Eigen::Index remainder = len % parts;
    Eigen::Index cursor = clip.begin;
    for (Eigen::Index p = 0; p < parts; ++p) {
      const Eigen::Index size = base + (p < remainder ? 1 : 0);
      out.push_back({cursor, cursor + size});
      cursor += size;
    }
  }
  return out;
}

}  // namespace vpsumm
