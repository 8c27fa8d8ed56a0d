#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "vpsumm/segment.hpp"

namespace vpsumm {

// Clip-level representations from frame-level features: feature row r
// covers frames [r*stride, (r+1)*stride); each clip averages the rows whose
// span intersects it, then l2-normalizes (all-zero rows stay zero and are
// reported through `warnings`). Returns one row per clip.
Eigen::MatrixXd pool_clip_features(const Eigen::MatrixXd& frame_features, const ClipList& clips,
                                   Eigen::Index stride = 16,
                                   std::vector<std::string>* warnings = nullptr);

}  // namespace vpsumm
