#pragma once

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <random>

#include "hyperfa/mghfa.hpp"

namespace testsupport {

// Integral over (0, inf), split at `mid` so that both halves are well resolved.
template <typename F>
double integrate_positive(F f, double mid) {
  boost::math::quadrature::tanh_sinh<double> left;
  boost::math::quadrature::exp_sinh<double> right;
  return left.integrate(f, 0.0, mid) + right.integrate([&](double t) { return f(t + mid); });
}

template <typename F>
double integrate_line(F f, double lo, double hi) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-13);
}

// log K_nu(x) from its integral representation in long double:
// K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt, scaled by e^x.
inline long double log_bessel_k_integral(long double nu, long double x) {
  const long double peak = std::asinh(std::fabs(nu) / x);
  auto f = [&](long double t) { return std::exp(-x * (std::cosh(t) - 1.0L) + std::fabs(nu) * t - std::fabs(nu) * peak) *
                                       (1.0L + std::exp(-2.0L * std::fabs(nu) * t)) / 2.0L; };
  boost::math::quadrature::tanh_sinh<long double> ts;
  boost::math::quadrature::exp_sinh<long double> es;
  const long double head = ts.integrate(f, 0.0L, peak + 1.0L);
  const long double tail = es.integrate([&](long double t) { return f(t + peak + 1.0L); });
  return std::log(head + tail) + std::fabs(nu) * peak - x;
}

// d/dnu log K_nu(x) from int t sinh(nu t) e^{-x cosh t} dt / K_nu(x), long double.
inline long double dlogk_dnu_integral(long double nu, long double x) {
  const long double a = std::fabs(nu);
  const long double peak = std::asinh(a / x);
  const long double width = 1.0L / std::sqrt(x * std::cosh(peak));
  auto base = [&](long double t) { return std::exp(-x * (std::cosh(t) - 1.0L) + a * t - a * peak); };
  auto num = [&](long double t) { return t * base(t) * (1.0L - std::exp(-2.0L * a * t)) / 2.0L; };
  auto den = [&](long double t) { return base(t) * (1.0L + std::exp(-2.0L * a * t)) / 2.0L; };
  boost::math::quadrature::tanh_sinh<long double> ts;
  boost::math::quadrature::exp_sinh<long double> es;
  const long double cut = peak + 10.0L * width + 1.0L;
  auto total = [&](auto f) { return ts.integrate(f, 0.0L, cut) + es.integrate([&](long double t) { return f(t + cut); }); };
  const long double d = total(num) / total(den);
  return nu < 0 ? -d : d;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = nd(rng);
  }
  return m;
}

inline Eigen::VectorXd random_positive(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

inline hyperfa::mghfa::GHFAComponent random_component(std::mt19937_64& rng, Eigen::Index p, int q) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  hyperfa::mghfa::GHFAComponent c;
  c.mu = random_matrix(rng, p, 1, 2.0);
  c.alpha = random_matrix(rng, p, 1, 0.5);
  c.loadings = random_matrix(rng, p, q, 0.7);
  c.noise = random_positive(rng, p, 0.3, 1.5);
  c.lambda = -1.5 + 3.0 * u(rng);
  c.omega = 0.5 + 2.5 * u(rng);
  return c;
}

inline hyperfa::mghfa::MixtureModel random_model(std::mt19937_64& rng, Eigen::Index p, int q, int G) {
  hyperfa::mghfa::MixtureModel m;
  m.q = q;
  m.weights = random_positive(rng, G, 0.5, 1.5);
  m.weights /= m.weights.sum();
  for (int g = 0; g < G; ++g) m.components.push_back(random_component(rng, p, q));
  return m;
}

}  // namespace testsupport
