#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyperfa/criteria.hpp"
#include "hyperfa/factor_scale.hpp"

namespace hyperfa::mghfa {

/// One generalized hyperbolic factor analyzer: location mu, skewness alpha,
/// scale Lambda Lambda' + Psi, index lambda and concentration omega.
struct GHFAComponent {
  Eigen::VectorXd mu;
  Eigen::VectorXd alpha;
  Eigen::MatrixXd loadings;  // p x q
  Eigen::VectorXd noise;     // diag(Psi)
  double lambda = -0.5;
  double omega = 1.0;

  FactoredScale scale() const { return {loadings, noise}; }
};

struct MixtureModel {
  Eigen::VectorXd weights;  // pi, on the simplex
  std::vector<GHFAComponent> components;
  int q = 1;

  int num_components() const { return static_cast<int>(components.size()); }
  Eigen::Index dim() const { return components.empty() ? 0 : components.front().mu.size(); }
};

/// Throws DomainError if shapes disagree, weights leave the simplex or a
/// component parameter is non-finite / out of range.
void validate(const MixtureModel& model, double psi_floor = kNoiseFloor);

/// Per-observation, per-component conditional expectations.
///   a = E[Y | x, g], b = E[1/Y | x, g], c = E[log Y | x, g]
///   e1 = E[u | x, g], e2 = E[u / Y | x, g], e3 = E[u u' / Y | x, g]
/// where u is the q-dimensional latent factor with u | y ~ N(0, y I_q).
struct EStepCache {
  Eigen::MatrixXd zhat;         // n x G responsibilities
  Eigen::MatrixXd log_density;  // n x G, log f_H(x_i | theta_g)
  Eigen::MatrixXd a, b, c;      // n x G
  std::vector<Eigen::MatrixXd> e1;               // per g, q x n
  std::vector<Eigen::MatrixXd> e2;               // per g, q x n
  std::vector<Eigen::MatrixXd> e3;               // per g, q x (q n); block i is E3 of row i
  std::vector<Eigen::MatrixXd> beta;             // per g, q x p
  double loglik = 0.0;

  int num_components() const { return static_cast<int>(zhat.cols()); }
  auto e3_at(int g, Eigen::Index i) const { return e3[g].middleCols(i * e3[g].rows(), e3[g].rows()); }
  double n_g(int g) const { return zhat.col(g).sum(); }
  double A_g(int g) const { return zhat.col(g).dot(a.col(g)) / n_g(g); }
  double B_g(int g) const { return zhat.col(g).dot(b.col(g)) / n_g(g); }
  double C_g(int g) const { return zhat.col(g).dot(c.col(g)) / n_g(g); }
};

/// Rows with a known component (0-based) keep a crisp indicator in every
/// E-step; -1 marks an unlabelled row.
using FixedAssignments = std::vector<int>;

/// Responsibilities by log-sum-exp, GIG moments with psi = omega + alpha'S^{-1}alpha,
/// chi = omega + delta, index lambda - p/2, and the latent-factor moments; every
/// S^{-1} goes through the factored precision. `loglik` is the observed-data
/// log-likelihood (the classification likelihood when `fixed` is non-empty).
/// Throws NonFiniteDensity naming the offending row and component.
/// With `with_log_moment` false the c column is left NaN; the second CM
/// stage does not use it and it costs most of the Bessel work.
EStepCache e_step(const Eigen::MatrixXd& data, const MixtureModel& model, const FixedAssignments& fixed = {},
                  bool with_log_moment = true);

/// Sum over rows of log sum_g pi_g f_H(x_i | theta_g).
double log_likelihood(const Eigen::MatrixXd& data, const MixtureModel& model);

/// The index/concentration objective of one component:
///   q_g(omega, lambda) = -log K_lambda(omega) + (lambda - 1) C_g - omega (A_g + B_g) / 2.
double concentration_objective(double omega, double lambda, double A, double B, double C);

struct CMOptions {
  double psi_floor = kNoiseFloor;
  double omega_min = 1e-6;
  double omega_max = 1e6;
  std::vector<std::string>* notes = nullptr;  // receives regularization messages
};

/// First CM stage: pi, mu, alpha in closed form, then the lambda fixed-point
/// step and a safeguarded Newton step in omega on q_g. Throws
/// DegenerateUpdate when sum_i z_ig (A_g b_ig - 1) vanishes.
MixtureModel cm_step_1(const Eigen::MatrixXd& data, const EStepCache& cache, const MixtureModel& model,
                       const CMOptions& opts = {});

/// Second CM stage: Lambda and Psi from the factor moments of a cache that is
/// fresh with respect to the current mu and alpha.
MixtureModel cm_step_2(const Eigen::MatrixXd& data, const EStepCache& cache, const MixtureModel& model,
                       const CMOptions& opts = {});

enum class InitMethod { kKMeans, kRandom, kGivenLabels };

struct FitConfig {
  int max_iter = 1000;
  double epsilon = 1e-5;
  selection::AitkenTarget aitken_target = selection::AitkenTarget::kLatest;
  int n_starts = 20;
  InitMethod init = InitMethod::kKMeans;
  std::vector<int> initial_labels;  // 1-based, for kGivenLabels
  std::uint64_t seed = 1;
  double psi_floor = kNoiseFloor;
  double omega_min = 1e-6;
  double omega_max = 1e6;
  int threads = 1;
};

struct StartDiagnostics {
  int start = 0;
  bool ok = false;
  std::string reason;  // failure reason when !ok
  double loglik = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<std::string> notes;
};

struct FitReport {
  MixtureModel model;
  int n = 0;
  Eigen::Index p = 0;
  double loglik = 0.0;
  double bic = 0.0;
  int iterations = 0;
  bool converged = false;
  int best_start = 0;
  std::vector<double> loglik_trace;
  std::vector<int> labels;              // 1-based argmax_g zhat_ig, ties to the lowest index
  std::vector<double> responsibility;   // max_g zhat_ig
  Eigen::MatrixXd zhat;
  std::vector<StartDiagnostics> starts;
};

/// Moment initialization from (soft) membership weights, n x G: cluster
/// means, cluster variances for Psi, top-q principal directions scaled by
/// root eigenvalues for Lambda, alpha = 0, lambda = -0.5, omega = 1.
MixtureModel initialize_from_weights(const Eigen::MatrixXd& data, const Eigen::MatrixXd& weights, int q,
                                     double psi_floor = kNoiseFloor);

/// Multi-start AECM fit. Each start alternates E-step, CM-1, E-step, CM-2
/// until the Aitken criterion fires or max_iter is reached; the start with
/// the highest final log-likelihood wins (ties to the earlier start). The
/// result does not depend on row order or on the thread count.
/// Throws FitFailure when every start is abandoned.
FitReport fit(const Eigen::MatrixXd& data, int G, int q, const FitConfig& config);

/// Same machinery with some rows anchored to known components (0-based,
/// -1 = free); the E-step keeps their responsibilities crisp. `init_weights`
/// seeds a single deterministic start.
FitReport fit_anchored(const Eigen::MatrixXd& data, int G, int q, const FitConfig& config,
                       const FixedAssignments& fixed, const Eigen::MatrixXd& init_weights);

}  // namespace hyperfa::mghfa
