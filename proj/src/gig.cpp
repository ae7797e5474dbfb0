#include "hyperfa/gig.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hyperfa/errors.hpp"
#include "hyperfa/specfun.hpp"

namespace hyperfa::gig {

GIGParams::GIGParams(double psi, double chi, double lambda) : psi_(psi), chi_(chi), lambda_(lambda) {
  if (!std::isfinite(psi) || !std::isfinite(chi) || !std::isfinite(lambda) || psi < kParamFloor ||
      chi < kParamFloor) {
    std::ostringstream msg;
    msg << "invalid GIG parameters: psi=" << psi << ", chi=" << chi << ", lambda=" << lambda;
    throw DomainError(msg.str());
  }
}

double GIGParams::omega() const noexcept { return std::sqrt(psi_ * chi_); }
double GIGParams::eta() const noexcept { return std::sqrt(chi_ / psi_); }

double log_density(double y, const GIGParams& params) {
  if (!(y > 0.0) || !std::isfinite(y)) {
    std::ostringstream msg;
    msg << "GIG density needs y > 0 (y=" << y << ")";
    throw DomainError(msg.str());
  }
  const double lam = params.lambda();
  return 0.5 * lam * std::log(params.psi() / params.chi()) + (lam - 1.0) * std::log(y) -
         std::numbers::ln2 - specfun::log_bessel_k(lam, params.omega()) -
         0.5 * (params.psi() * y + params.chi() / y);
}

double inverse_mean_recurrence_form(const GIGParams& params) {
  const double ratio = std::exp(specfun::log_bessel_k_ratio(params.lambda(), params.omega()));
  return ratio / params.eta() - 2.0 * params.lambda() / params.chi();
}

double inverse_mean_direct_form(const GIGParams& params) {
  // K_{l-1}/K_l = 1 / (K_l / K_{l-1})
  const double log_ratio = specfun::log_bessel_k_ratio(params.lambda() - 1.0, params.omega());
  return std::exp(-log_ratio) / params.eta();
}

Moments moments(const GIGParams& params) {
  return moments(params, specfun::log_bessel_k_pair(params.lambda(), params.omega()), true);
}

Moments moments(const GIGParams& params, const specfun::LogKPair& at_index, bool with_log) {
  const double w = params.omega();
  const double eta = params.eta();
  const double lam = params.lambda();
  Moments m{};
  const double ratio = std::exp(at_index.log_ratio);
  m.e_y = eta * ratio;
  m.e_inv_y = lam > 0.0 ? inverse_mean_direct_form(params) : ratio / eta - 2.0 * lam / params.chi();
  m.e_log_y = with_log ? std::log(eta) + specfun::dlogk_dnu(lam, w) : std::nan("");
  if (!(m.e_inv_y > 0.0) || !(m.e_y > 0.0) || (with_log && !std::isfinite(m.e_log_y))) {
    std::ostringstream msg;
    msg << "GIG moments not positive/finite: E[Y]=" << m.e_y << ", E[1/Y]=" << m.e_inv_y
        << " (psi=" << params.psi() << ", chi=" << params.chi() << ", lambda=" << lam << ")";
    throw DomainError(msg.str());
  }
  return m;
}

namespace {

// Mode of the standard density x^{l-1} exp(-w (x + 1/x) / 2), l >= 0.
double standard_mode(double lambda, double omega) {
  if (lambda >= 1.0) return (std::sqrt((lambda - 1.0) * (lambda - 1.0) + omega * omega) + (lambda - 1.0)) / omega;
  return omega / (std::sqrt((1.0 - lambda) * (1.0 - lambda) + omega * omega) + (1.0 - lambda));
}

// Ratio-of-uniforms without shift (Dagpunar; Lehner).
double rou_noshift(double lambda, double omega, RandomStream& rng) {
  const double t = 0.5 * (lambda - 1.0);
  const double s = 0.25 * omega;
  const double xm = standard_mode(lambda, omega);
  const double nc = t * std::log(xm) - s * (xm + 1.0 / xm);
  const double ym = ((lambda + 1.0) + std::sqrt((lambda + 1.0) * (lambda + 1.0) + omega * omega)) / omega;
  const double um = std::exp(0.5 * (lambda + 1.0) * std::log(ym) - s * (ym + 1.0 / ym) - nc);
  for (;;) {
    const double u = um * uniform_open(rng);
    const double v = uniform_open(rng);
    const double x = u / v;
    if (std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc) return x;
  }
}

// Constant hat in the log-concave part; 0 <= lambda < 1, omega <= 1.
double rou_new_approach(double lambda, double omega, RandomStream& rng) {
  const double xm = standard_mode(lambda, omega);
  const double x0 = omega / (1.0 - lambda);
  const double k0 = std::exp((lambda - 1.0) * std::log(xm) - 0.5 * omega * (xm + 1.0 / xm));
  double area[3];
  area[0] = k0 * x0;
  double k1 = 0.0;
  double k2 = 0.0;
  if (x0 >= 2.0 / omega) {
    area[1] = 0.0;
    k2 = std::pow(x0, lambda - 1.0);
    area[2] = k2 * 2.0 * std::exp(-omega * x0 / 2.0) / omega;
  } else {
    k1 = std::exp(-omega);
    area[1] = lambda == 0.0 ? k1 * std::log(2.0 / (omega * omega))
                            : k1 / lambda * (std::pow(2.0 / omega, lambda) - std::pow(x0, lambda));
    k2 = std::pow(2.0 / omega, lambda - 1.0);
    area[2] = k2 * 2.0 * std::exp(-1.0) / omega;
  }
  const double total = area[0] + area[1] + area[2];
  for (;;) {
    double v = total * uniform_open(rng);
    double x = 0.0;
    double hx = 0.0;
    if (v <= area[0]) {
      x = x0 * v / area[0];
      hx = k0;
    } else if ((v -= area[0]) <= area[1]) {
      if (lambda == 0.0) {
        x = omega * std::exp(std::exp(omega) * v);
        hx = k1 / x;
      } else {
        x = std::pow(std::pow(x0, lambda) + lambda / k1 * v, 1.0 / lambda);
        hx = k1 * std::pow(x, lambda - 1.0);
      }
    } else {
      v -= area[1];
      const double a = std::max(x0, 2.0 / omega);
      x = -2.0 / omega * std::log(std::exp(-omega / 2.0 * a) - omega / (2.0 * k2) * v);
      hx = k2 * std::exp(-omega / 2.0 * x);
    }
    const double u = uniform_open(rng) * hx;
    if (std::log(u) <= (lambda - 1.0) * std::log(x) - omega / 2.0 * (x + 1.0 / x)) return x;
  }
}

// Ratio-of-uniforms with shift by the mode (Dagpunar 1989), roots of the
// bounding cubic by Cardano's rule.
double rou_shift(double lambda, double omega, RandomStream& rng) {
  const double t = 0.5 * (lambda - 1.0);
  const double s = 0.25 * omega;
  const double xm = standard_mode(lambda, omega);
  const double nc = t * std::log(xm) - s * (xm + 1.0 / xm);
  const double a = -(2.0 * (lambda + 1.0) / omega + xm);
  const double b = 2.0 * (lambda - 1.0) * xm / omega - 1.0;
  const double c = xm;
  const double p = b - a * a / 3.0;
  const double q = (2.0 * a * a * a) / 27.0 - (a * b) / 3.0 + c;
  const double fi = std::acos(-q / (2.0 * std::sqrt(-(p * p * p) / 27.0)));
  const double fak = 2.0 * std::sqrt(-p / 3.0);
  const double y1 = fak * std::cos(fi / 3.0) - a / 3.0;
  const double y2 = fak * std::cos(fi / 3.0 + 4.0 / 3.0 * std::numbers::pi) - a / 3.0;
  const double uplus = (y1 - xm) * std::exp(t * std::log(y1) - s * (y1 + 1.0 / y1) - nc);
  const double uminus = (y2 - xm) * std::exp(t * std::log(y2) - s * (y2 + 1.0 / y2) - nc);
  for (;;) {
    const double u = uminus + uniform_open(rng) * (uplus - uminus);
    const double v = uniform_open(rng);
    const double x = u / v + xm;
    if (x > 0.0 && std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc) return x;
  }
}

}  // namespace

double sample_one(const GIGParams& params, RandomStream& rng) {
  const double lambda = std::abs(params.lambda());
  const double omega = params.omega();
  const double eta = params.eta();
  double x = 0.0;
  if (lambda > 2.0 || omega > 3.0) {
    x = rou_shift(lambda, omega, rng);
  } else if (lambda >= 1.0 - 2.25 * omega * omega || omega > 0.2) {
    x = rou_noshift(lambda, omega, rng);
  } else {
    x = rou_new_approach(lambda, omega, rng);
  }
  return params.lambda() < 0.0 ? eta / x : eta * x;
}

std::vector<double> sample(const GIGParams& params, RandomStream& rng, std::size_t n) {
  if (n == 0) throw DomainError("GIG sample size must be positive");
  std::vector<double> out(n);
  for (auto& y : out) y = sample_one(params, rng);
  return out;
}

}  // namespace hyperfa::gig
