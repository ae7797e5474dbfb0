#include "hyperfa/ghd.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hyperfa/errors.hpp"
#include "hyperfa/gig.hpp"
#include "hyperfa/specfun.hpp"

namespace hyperfa::ghd {
namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

Eigen::LLT<Eigen::MatrixXd> dense_cholesky(const Eigen::MatrixXd& sigma) {
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) throw DomainError("GH scale matrix is not symmetric positive definite");
  return llt;
}

double llt_log_det(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

Mahalanobis dense_terms(const Eigen::LLT<Eigen::MatrixXd>& llt, const Eigen::VectorXd& r,
                        const Eigen::VectorXd& alpha) {
  const Eigen::VectorXd lr = llt.matrixL().solve(r);
  const Eigen::VectorXd la = llt.matrixL().solve(alpha);
  return {lr.squaredNorm(), la.squaredNorm(), lr.dot(la)};
}

}  // namespace

Eigen::MatrixXd GHParams::dense_scale() const {
  if (const auto* s = std::get_if<Eigen::MatrixXd>(&scale)) return *s;
  return std::get<FactoredScale>(scale).dense();
}

void validate(const GHParams& params) {
  const Eigen::Index p = params.mu.size();
  if (p == 0 || params.alpha.size() != p) throw DomainError("GH parameters: mu/alpha dimension mismatch");
  if (!(params.omega > 0.0) || !std::isfinite(params.omega) || !std::isfinite(params.lambda)) {
    throw DomainError("GH parameters: need finite lambda and omega > 0");
  }
  if (const auto* s = std::get_if<Eigen::MatrixXd>(&params.scale)) {
    if (s->rows() != p || s->cols() != p) throw DomainError("GH parameters: scale dimension mismatch");
  } else if (std::get<FactoredScale>(params.scale).dim() != p) {
    throw DomainError("GH parameters: factored scale dimension mismatch");
  }
}

double log_density_kernel(Eigen::Index p, const Mahalanobis& m, double log_det, double lambda, double omega) {
  const double nu = lambda - 0.5 * static_cast<double>(p);
  const double chi = omega + m.delta;
  const double psi = omega + m.rho;
  return log_density_kernel(p, m, log_det, lambda, omega, specfun::log_bessel_k(nu, std::sqrt(psi * chi)),
                            specfun::log_bessel_k(lambda, omega));
}

double log_density_kernel(Eigen::Index p, const Mahalanobis& m, double log_det, double lambda, double omega,
                          double log_k_post, double log_k_prior) {
  const double half_p = 0.5 * static_cast<double>(p);
  const double nu = lambda - half_p;
  return 0.5 * nu * (std::log(omega + m.delta) - std::log(omega + m.rho)) + log_k_post - half_p * kLog2Pi -
         0.5 * log_det - log_k_prior + m.cross;
}

double log_density(const Eigen::VectorXd& x, const GHParams& params) {
  validate(params);
  if (x.size() != params.dim()) throw DomainError("GH density: observation dimension mismatch");
  const Eigen::VectorXd r = x - params.mu;
  if (const auto* s = std::get_if<Eigen::MatrixXd>(&params.scale)) {
    const auto llt = dense_cholesky(*s);
    return log_density_kernel(params.dim(), dense_terms(llt, r, params.alpha), llt_log_det(llt), params.lambda,
                              params.omega);
  }
  const FactoredPrecision prec(std::get<FactoredScale>(params.scale));
  const Eigen::VectorXd sa = prec.solve(params.alpha);
  const Mahalanobis m{prec.quad_form(r), params.alpha.dot(sa), r.dot(sa)};
  return log_density_kernel(params.dim(), m, prec.log_det(), params.lambda, params.omega);
}

double log_density_legacy(const Eigen::VectorXd& x, const Eigen::VectorXd& mu, const Eigen::VectorXd& alpha,
                          const Eigen::MatrixXd& sigma, double chi, double phi, double lambda) {
  const Eigen::Index p = mu.size();
  if (x.size() != p || alpha.size() != p || sigma.rows() != p || sigma.cols() != p) {
    throw DomainError("GH legacy density: dimension mismatch");
  }
  if (!(chi > 0.0) || !(phi > 0.0)) throw DomainError("GH legacy density: need chi, phi > 0");
  const auto llt = dense_cholesky(sigma);
  const double log_det = llt_log_det(llt);
  if (std::abs(std::exp(log_det) - 1.0) > 1e-8) {
    std::ostringstream msg;
    msg << "the (chi, phi) parameterization requires |Sigma| = 1, got " << std::exp(log_det);
    throw ConstraintViolation(msg.str());
  }
  const Mahalanobis m = dense_terms(llt, x - mu, alpha);
  const double half_p = 0.5 * static_cast<double>(p);
  const double nu = lambda - half_p;
  return 0.5 * nu * (std::log(chi + m.delta) - std::log(phi + m.rho)) + 0.5 * lambda * std::log(phi / chi) +
         specfun::log_bessel_k(nu, std::sqrt((phi + m.rho) * (chi + m.delta))) - half_p * kLog2Pi -
         0.5 * log_det - specfun::log_bessel_k(lambda, std::sqrt(chi * phi)) + m.cross;
}

Eigen::MatrixXd sample(const GHParams& params, RandomStream& rng, std::size_t n) {
  validate(params);
  if (n == 0) throw DomainError("GH sample size must be positive");
  const Eigen::Index p = params.dim();
  const gig::GIGParams mixing(params.omega, params.omega, params.lambda);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n), p);
  Eigen::VectorXd v(p);
  if (const auto* s = std::get_if<Eigen::MatrixXd>(&params.scale)) {
    const Eigen::MatrixXd l = dense_cholesky(*s).matrixL();
    for (std::size_t i = 0; i < n; ++i) {
      const double y = gig::sample_one(mixing, rng);
      for (Eigen::Index j = 0; j < p; ++j) v[j] = standard_normal(rng);
      out.row(static_cast<Eigen::Index>(i)) = (params.mu + y * params.alpha + std::sqrt(y) * (l * v)).transpose();
    }
    return out;
  }
  const auto& fs = std::get<FactoredScale>(params.scale);
  const Eigen::VectorXd sd = fs.noise.cwiseSqrt();
  Eigen::VectorXd u(fs.factors());
  for (std::size_t i = 0; i < n; ++i) {
    const double y = gig::sample_one(mixing, rng);
    for (Eigen::Index k = 0; k < u.size(); ++k) u[k] = standard_normal(rng);
    for (Eigen::Index j = 0; j < p; ++j) v[j] = sd[j] * standard_normal(rng);
    out.row(static_cast<Eigen::Index>(i)) =
        (params.mu + y * params.alpha + std::sqrt(y) * (fs.loadings * u + v)).transpose();
  }
  return out;
}

}  // namespace hyperfa::ghd
