#pragma once

#include <Eigen/Dense>

namespace hyperfa {

/// Default lower bound for the diagonal of Psi.
inline constexpr double kNoiseFloor = 1e-6;

/// Sigma = Lambda Lambda' + Psi with Lambda p x q and Psi diagonal.
struct FactoredScale {
  Eigen::MatrixXd loadings;  // p x q
  Eigen::VectorXd noise;     // diag(Psi), p entries

  Eigen::Index dim() const { return loadings.rows(); }
  Eigen::Index factors() const { return loadings.cols(); }
  Eigen::MatrixXd dense() const;
};

struct WoodburyResult {
  Eigen::MatrixXd inverse;  // (Lambda Lambda' + Psi)^{-1}
  double log_det;           // log |Lambda Lambda' + Psi|
};

/// (LL' + Psi)^{-1} = Psi^{-1} - Psi^{-1} L (I_q + L' Psi^{-1} L)^{-1} L' Psi^{-1},
/// log|LL' + Psi| = log|I_q + L' Psi^{-1} L| + sum log psi_j.
/// Only the q x q middle matrix is factorized. Throws DomainError when a
/// noise entry is below `floor` or shapes disagree.
WoodburyResult woodbury_inverse(const FactoredScale& scale, double floor = kNoiseFloor);

/// Precision operator of a factored scale, applied without forming p x p
/// matrices. Holds the Cholesky factor of M = I_q + L' Psi^{-1} L.
class FactoredPrecision {
 public:
  explicit FactoredPrecision(const FactoredScale& scale, double floor = kNoiseFloor);

  Eigen::Index dim() const { return psi_inv_.size(); }
  double log_det() const { return log_det_; }

  /// Sigma^{-1} v
  Eigen::VectorXd solve(const Eigen::VectorXd& v) const;
  /// v' Sigma^{-1} v
  double quad_form(const Eigen::VectorXd& v) const;
  /// u' Sigma^{-1} v
  double bilinear(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;

  /// beta = L' Sigma^{-1} = M^{-1} L' Psi^{-1}, q x p.
  const Eigen::MatrixXd& beta() const { return beta_; }
  const Eigen::VectorXd& psi_inv() const { return psi_inv_; }
  /// L' Psi^{-1}, q x p.
  const Eigen::MatrixXd& weighted_loadings_t() const { return w_; }
  const Eigen::LLT<Eigen::MatrixXd>& middle() const { return middle_; }

 private:
  Eigen::VectorXd psi_inv_;
  Eigen::MatrixXd w_;
  Eigen::LLT<Eigen::MatrixXd> middle_;
  Eigen::MatrixXd beta_;
  double log_det_ = 0.0;
};

}  // namespace hyperfa
