#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hyperfa/random.hpp"

namespace hyperfa {

struct KMeansResult {
  std::vector<int> labels;  // 0-based cluster index per row
  Eigen::MatrixXd centers;  // k x p
  int iterations = 0;
};

/// k-means++ seeding followed by at most `max_iter` Lloyd iterations. Rows of
/// `data` are observations. Deterministic given the stream state.
KMeansResult kmeans(const Eigen::MatrixXd& data, int k, RandomStream& rng, int max_iter = 50);

}  // namespace hyperfa
