#include "hyperfa/factor_scale.hpp"

#include <cmath>
#include <sstream>

#include "hyperfa/errors.hpp"

namespace hyperfa {
namespace {

void validate(const FactoredScale& scale, double floor) {
  if (scale.noise.size() != scale.loadings.rows()) {
    throw DomainError("factored scale: noise length differs from loadings rows");
  }
  for (Eigen::Index j = 0; j < scale.noise.size(); ++j) {
    if (!(scale.noise[j] >= floor) || !std::isfinite(scale.noise[j])) {
      std::ostringstream msg;
      msg << "factored scale: noise[" << j << "]=" << scale.noise[j] << " below floor " << floor;
      throw DomainError(msg.str());
    }
  }
  if (!scale.loadings.allFinite()) throw DomainError("factored scale: non-finite loadings");
}

}  // namespace

Eigen::MatrixXd FactoredScale::dense() const {
  Eigen::MatrixXd sigma = loadings * loadings.transpose();
  sigma.diagonal() += noise;
  return sigma;
}

FactoredPrecision::FactoredPrecision(const FactoredScale& scale, double floor) {
  validate(scale, floor);
  const Eigen::Index q = scale.factors();
  psi_inv_ = scale.noise.cwiseInverse();
  w_ = scale.loadings.transpose() * psi_inv_.asDiagonal();
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(q, q) + w_ * scale.loadings;
  middle_.compute(m);
  if (middle_.info() != Eigen::Success) throw DomainError("factored scale: I + L'Psi^{-1}L not SPD");
  beta_ = middle_.solve(w_);
  double log_det_m = 0.0;
  const Eigen::MatrixXd l = middle_.matrixL();
  for (Eigen::Index k = 0; k < q; ++k) log_det_m += 2.0 * std::log(l(k, k));
  log_det_ = log_det_m + scale.noise.array().log().sum();
}

Eigen::VectorXd FactoredPrecision::solve(const Eigen::VectorXd& v) const {
  return psi_inv_.cwiseProduct(v) - w_.transpose() * middle_.solve(w_ * v);
}

double FactoredPrecision::quad_form(const Eigen::VectorXd& v) const {
  const Eigen::VectorXd wv = w_ * v;
  return v.cwiseProduct(psi_inv_).dot(v) - wv.dot(middle_.solve(wv));
}

double FactoredPrecision::bilinear(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  const Eigen::VectorXd wv = w_ * v;
  return u.cwiseProduct(psi_inv_).dot(v) - (w_ * u).dot(middle_.solve(wv));
}

WoodburyResult woodbury_inverse(const FactoredScale& scale, double floor) {
  const FactoredPrecision prec(scale, floor);
  Eigen::MatrixXd inverse = -prec.weighted_loadings_t().transpose() * prec.middle().solve(prec.weighted_loadings_t());
  inverse.diagonal() += prec.psi_inv();
  return {inverse, prec.log_det()};
}

}  // namespace hyperfa
