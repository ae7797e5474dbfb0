#pragma once

// Modified Bessel function of the third kind K_nu(x) for real order, in log
// scale. Downstream code never touches K itself: for the orders and
// arguments that appear at p ~ 100 the raw value under- or overflows.

namespace hyperfa::specfun {

/// log K_nu(x). Even in nu. Throws DomainError unless x > 0 and both
/// arguments are finite.
double log_bessel_k(double nu, double x);

/// log(e^x K_nu(x)); same domain as log_bessel_k.
double log_bessel_k_scaled(double nu, double x);

/// log K_{nu+1}(x) - log K_nu(x), valid for any real nu (negative orders are
/// reflected, not recurred downward).
double log_bessel_k_ratio(double nu, double x);

/// log K_nu(x) together with log K_{nu+1}(x) - log K_nu(x), from a single
/// evaluation.
struct LogKPair {
  double log_k;
  double log_ratio;
};
LogKPair log_bessel_k_pair(double nu, double x);

/// d/dt log K_t(x) at t = nu. Odd in nu, exactly zero at nu = 0.
double dlogk_dnu(double nu, double x);

/// d/dx log K_nu(x) = nu/x - K_{nu+1}(x)/K_nu(x).
double dlogk_dx(double nu, double x);

/// d^2/dx^2 log K_nu(x) = 1 - nu/x^2 + (2nu+1) R/x - R^2, R = K_{nu+1}/K_nu.
double d2logk_dx2(double nu, double x);

}  // namespace hyperfa::specfun
