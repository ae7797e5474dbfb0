#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <variant>

#include "hyperfa/factor_scale.hpp"
#include "hyperfa/random.hpp"

namespace hyperfa::ghd {

/// Generalized hyperbolic law in the (omega, eta = 1) parameterization:
/// X = mu + Y alpha + sqrt(Y) V with Y ~ GIG(omega, omega, lambda) and
/// V ~ N(0, Sigma). The scale is either a dense SPD matrix or Lambda Lambda' + Psi.
struct GHParams {
  Eigen::VectorXd mu;
  Eigen::VectorXd alpha;
  std::variant<Eigen::MatrixXd, FactoredScale> scale;
  double lambda = 0.5;
  double omega = 1.0;

  Eigen::Index dim() const { return mu.size(); }
  Eigen::MatrixXd dense_scale() const;
};

/// Throws DomainError for inconsistent shapes, omega <= 0 or a non-SPD scale.
void validate(const GHParams& params);

/// Sufficient scalars of one evaluation: delta = (x-mu)' S^{-1} (x-mu),
/// rho = alpha' S^{-1} alpha, cross = (x-mu)' S^{-1} alpha.
struct Mahalanobis {
  double delta;
  double rho;
  double cross;
};

/// log f_H from the sufficient scalars; shared by the density and the E-step.
double log_density_kernel(Eigen::Index p, const Mahalanobis& m, double log_det, double lambda, double omega);

/// Same with the two Bessel terms supplied: log K_{lambda-p/2}(sqrt((omega+rho)(omega+delta)))
/// and log K_lambda(omega).
double log_density_kernel(Eigen::Index p, const Mahalanobis& m, double log_det, double lambda, double omega,
                          double log_k_post, double log_k_prior);

double log_density(const Eigen::VectorXd& x, const GHParams& params);

/// Density in the original (chi, phi) parameterization, which requires
/// |Sigma| = 1. phi plays the role of psi in the GIG law. Equals log_density
/// with omega = sqrt(chi phi) when chi = phi; in general the law matches
/// log_density with alpha and Sigma scaled by eta = sqrt(chi/phi).
/// Throws ConstraintViolation if | |Sigma| - 1 | > 1e-8.
double log_density_legacy(const Eigen::VectorXd& x, const Eigen::VectorXd& mu, const Eigen::VectorXd& alpha,
                          const Eigen::MatrixXd& sigma, double chi, double phi, double lambda);

/// n draws as rows of an n x p matrix.
Eigen::MatrixXd sample(const GHParams& params, RandomStream& rng, std::size_t n);

}  // namespace hyperfa::ghd
