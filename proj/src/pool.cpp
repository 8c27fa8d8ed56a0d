#include "vpsumm/pool.hpp"

#include <algorithm>
#include <iostream>

namespace vpsumm {

Eigen::MatrixXd pool_clip_features(const Eigen::MatrixXd& frame_features, const ClipList& clips,
                                   Eigen::Index stride, std::vector<std::string>* warnings) {
  if (stride < 1) {
    throw Error(ErrorCode::InvalidArgument, "stride must be at least 1");
  }
  if (frame_features.rows() == 0 || frame_features.cols() == 0) {
    throw Error(ErrorCode::InvalidArgument, "frame feature matrix is empty");
  }
  if (clips.empty()) {
    throw Error(ErrorCode::InvalidArgument, "clip list is empty");
  }
  if (!frame_features.allFinite()) {
    throw Error(ErrorCode::NonFiniteValue, "frame features contain NaN or infinity");
  }

  Eigen::MatrixXd pooled(static_cast<Eigen::Index>(clips.size()), frame_features.cols());
  for (std::size_t c = 0; c < clips.size(); ++c) {
    const ClipRange& clip = clips[c];
    if (clip.begin < 0 || clip.end <= clip.begin) {
      throw Error(ErrorCode::InvalidArgument,
                  "clip " + std::to_string(c) + " has an invalid frame range");
    }
    // Rows whose frame span [r*stride, (r+1)*stride) intersects the clip.
    const Eigen::Index first = clip.begin / stride;
    const Eigen::Index last = std::min((clip.end - 1) / stride, frame_features.rows() - 1);
    if (first >= frame_features.rows()) {
      throw Error(ErrorCode::OutOfRange, "clip " + std::to_string(c) +
                                             " starts beyond the covered frame range");
    }
    const Eigen::RowVectorXd mean =
        frame_features.middleRows(first, last - first + 1).colwise().mean();
    const double norm = mean.norm();
    if (norm == 0.0) {
      pooled.row(static_cast<Eigen::Index>(c)).setZero();
      const std::string message =
          "clip " + std::to_string(c) + " pooled to an all-zero feature vector";
      if (warnings != nullptr) {
        warnings->push_back(message);
      } else {
        std::cerr << "warning: " << message << "\n";
      }
    } else {
      pooled.row(static_cast<Eigen::Index>(c)) = mean / norm;
    }
  }
  return pooled;
}

}  // namespace vpsumm
