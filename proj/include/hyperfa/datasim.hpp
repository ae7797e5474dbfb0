#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace hyperfa::datasim {

enum class Family { kGaussian, kSkewNormal, kGH };

Family parse_family(const std::string& name);  // "gaussian", "skew-normal", "gh"
std::string family_name(Family family);

struct SimDesign {
  Family family = Family::kGaussian;
  int p = 10;
  int G = 2;
  int n_per_component = 100;
  double hypercube_side = 200.0;
  double skew_lo = 10.0;  // |alpha_j| ~ U[skew_lo, skew_hi], random sign
  double skew_hi = 20.0;
  double gh_omega = 1.0;
  double gh_lambda = 0.5;
  std::uint64_t seed = 1;
  bool random_correlation = false;  // off-diagonal structure on top of the diagonal scale
};

struct SimComponent {
  Eigen::VectorXd mu;
  Eigen::VectorXd alpha;  // zero for the Gaussian family
  Eigen::MatrixXd sigma;
};

struct SimData {
  Eigen::MatrixXd data;                 // rows grouped by component
  std::vector<int> truth;               // 1-based
  std::vector<SimComponent> components;
};

/// Equal-size components with means uniform on [0, side]^p and scale
/// diag(1 + U[-0.9, 0.9]). Component g draws from its own stream, so the
/// output is a pure function of the design.
SimData generate(const SimDesign& design);

/// Hubert-Arabie adjusted Rand index. Two constant partitions give 1.
double ari(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace hyperfa::datasim
