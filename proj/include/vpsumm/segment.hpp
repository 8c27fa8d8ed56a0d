#pragma once

#include <Eigen/Core>
#include <vector>

#include "vpsumm/error.hpp"

namespace vpsumm {

// One decoded frame as a (pixels x channels) matrix with values in [0, 1].
using Frame = Eigen::MatrixXd;
using FrameSequence = std::vector<Frame>;

// Fraction of pixels changed between consecutive frames; entry t compares
// frame t with frame t+1, so the signal has frame_count - 1 entries.
using DiffSignal = std::vector<double>;

struct ClipRange {
  Eigen::Index begin = 0;  // inclusive frame index
  Eigen::Index end = 0;    // exclusive

  Eigen::Index length() const { return end - begin; }
  friend bool operator==(const ClipRange&, const ClipRange&) = default;
};
using ClipList = std::vector<ClipRange>;

// A pixel counts as changed when the largest absolute channel difference
// exceeds pixel_tol in either color space.
DiffSignal frame_diff_fraction(const FrameSequence& frames_rgb, const FrameSequence& frames_hsv,
                               double pixel_tol = 30.0 / 255.0);

// Cut positions: a boundary at frame index t+1 wherever signal[t] strictly
// exceeds the threshold. Returned indices are the start frames of new clips.
std::vector<Eigen::Index> detect_change_points(const DiffSignal& signal, double threshold = 0.75);

// Turns cut positions into clips covering [0, total_frames), then enforces
// the length band: clips shorter than min_len merge into the following clip
// (a short final clip merges backward), and clips longer than max_len split
// into ceil(len/max_len) parts whose sizes differ by at most one frame.
ClipList normalize_clips(const std::vector<Eigen::Index>& boundaries, Eigen::Index total_frames,
                         Eigen::Index min_len = 32, Eigen::Index max_len = 112);

}  // namespace vpsumm
