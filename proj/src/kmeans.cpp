#include "hyperfa/kmeans.hpp"

#include <limits>

#include "hyperfa/errors.hpp"

namespace hyperfa {

KMeansResult kmeans(const Eigen::MatrixXd& data, int k, RandomStream& rng, int max_iter) {
  const Eigen::Index n = data.rows();
  if (k < 1 || n < k) throw InputError("kmeans: need 1 <= k <= n");

  KMeansResult res;
  res.centers.resize(k, data.cols());
  Eigen::VectorXd d2 = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());

  auto pick = static_cast<Eigen::Index>(uniform_open(rng) * static_cast<double>(n));
  pick = std::min(pick, n - 1);
  res.centers.row(0) = data.row(pick);
  for (int c = 1; c < k; ++c) {
    for (Eigen::Index i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], (data.row(i) - res.centers.row(c - 1)).squaredNorm());
    }
    const double total = d2.sum();
    if (!(total > 0.0)) {
      // every remaining point coincides with a center
      res.centers.row(c) = data.row(std::min<Eigen::Index>(c, n - 1));
      continue;
    }
    const double target = uniform_open(rng) * total;
    double acc = 0.0;
    pick = n - 1;
    for (Eigen::Index i = 0; i < n; ++i) {
      acc += d2[i];
      if (acc >= target && d2[i] > 0.0) {
        pick = i;
        break;
      }
    }
    res.centers.row(c) = data.row(pick);
  }

  res.labels.assign(static_cast<std::size_t>(n), -1);
  for (int it = 0; it < max_iter; ++it) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = (data.row(i) - res.centers.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (res.labels[i] != best) {
        res.labels[i] = best;
        changed = true;
      }
    }
    res.iterations = it + 1;
    if (!changed) break;
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, data.cols());
    std::vector<int> counts(k, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(res.labels[i]) += data.row(i);
      ++counts[res.labels[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) res.centers.row(c) = sums.row(c) / counts[c];
    }
  }
  return res;
}

}  // namespace hyperfa
