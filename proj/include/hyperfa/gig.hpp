#pragma once

#include <cstddef>
#include <vector>

#include "hyperfa/random.hpp"
#include "hyperfa/specfun.hpp"

namespace hyperfa::gig {

/// Parameters below this are rejected; the density needs psi, chi > 0.
inline constexpr double kParamFloor = 1e-12;

/// GIG(psi, chi, lambda) on (0, inf):
///   h(y) = (psi/chi)^{lambda/2} y^{lambda-1} / (2 K_lambda(sqrt(psi chi)))
///          * exp(-(psi y + chi / y) / 2).
/// psi multiplies y and chi multiplies 1/y. The equivalent (omega, eta) form
/// uses omega = sqrt(psi chi) and eta = sqrt(chi / psi), a pure scale.
class GIGParams {
 public:
  /// Throws DomainError unless psi, chi >= kParamFloor and all finite.
  GIGParams(double psi, double chi, double lambda);

  double psi() const noexcept { return psi_; }
  double chi() const noexcept { return chi_; }
  double lambda() const noexcept { return lambda_; }
  double omega() const noexcept;
  double eta() const noexcept;

 private:
  double psi_;
  double chi_;
  double lambda_;
};

struct Moments {
  double e_y;      // E[Y]
  double e_inv_y;  // E[1/Y]
  double e_log_y;  // E[log Y]
};

double log_density(double y, const GIGParams& params);

/// E[Y], E[1/Y], E[log Y]. E[1/Y] uses sqrt(psi/chi) K_{l+1}/K_l - 2l/chi
/// for l <= 0 and the cancellation-free sqrt(psi/chi) K_{l-1}/K_l for l > 0;
/// a non-positive result is reported as DomainError, never clamped.
Moments moments(const GIGParams& params);

/// Same, reusing log K_l(omega) and its ratio (specfun::log_bessel_k_pair at
/// the index and omega of `params`). Without `with_log`, e_log_y is NaN and
/// the order derivative is not evaluated.
Moments moments(const GIGParams& params, const specfun::LogKPair& at_index, bool with_log);

/// E[1/Y] = sqrt(psi/chi) K_{l+1}/K_l - 2 l / chi.
double inverse_mean_recurrence_form(const GIGParams& params);
/// E[1/Y] = sqrt(psi/chi) K_{l-1}/K_l.
double inverse_mean_direct_form(const GIGParams& params);

/// Hormann-Leydold ratio-of-uniforms generator (with mode shift where
/// needed). Negative lambda is sampled through 1/Y ~ GIG(chi, psi, -lambda).
double sample_one(const GIGParams& params, RandomStream& rng);
std::vector<double> sample(const GIGParams& params, RandomStream& rng, std::size_t n);

}  // namespace hyperfa::gig
