#include "hyperfa/mghfa.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "hyperfa/errors.hpp"
#include "hyperfa/ghd.hpp"
#include "hyperfa/gig.hpp"
#include "hyperfa/kmeans.hpp"
#include "hyperfa/random.hpp"
#include "hyperfa/specfun.hpp"

namespace hyperfa::mghfa {
namespace {

constexpr double kTiny = std::numeric_limits<double>::min();
constexpr Eigen::Index kBlock = 64;  // rows per residual block; keeps temporaries small

template <typename V>
double log_sum_exp(const V& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

void check_data(const Eigen::MatrixXd& data, const MixtureModel& model) {
  if (data.cols() != model.dim()) {
    std::ostringstream msg;
    msg << "data has " << data.cols() << " columns but the model has dimension " << model.dim();
    throw InputError(msg.str());
  }
}

}  // namespace

void validate(const MixtureModel& model, double psi_floor) {
  const int G = model.num_components();
  if (G < 1) throw DomainError("mixture has no components");
  if (model.weights.size() != G) throw DomainError("mixture weights do not match component count");
  if ((model.weights.array() <= 0.0).any() || std::abs(model.weights.sum() - 1.0) > 1e-8) {
    throw DomainError("mixture weights must be positive and sum to one");
  }
  const Eigen::Index p = model.dim();
  for (int g = 0; g < G; ++g) {
    const auto& c = model.components[g];
    if (c.mu.size() != p || c.alpha.size() != p || c.noise.size() != p || c.loadings.rows() != p ||
        c.loadings.cols() != model.q) {
      throw DomainError("component " + std::to_string(g + 1) + " has inconsistent dimensions");
    }
    if (!c.mu.allFinite() || !c.alpha.allFinite() || !c.loadings.allFinite() || !std::isfinite(c.lambda) ||
        !std::isfinite(c.omega) || !(c.omega > 0.0) || !((c.noise.array() >= psi_floor).all())) {
      throw DomainError("component " + std::to_string(g + 1) + " has invalid parameters");
    }
  }
}

EStepCache e_step(const Eigen::MatrixXd& data, const MixtureModel& model, const FixedAssignments& fixed,
                  bool with_log_moment) {
  check_data(data, model);
  const Eigen::Index n = data.rows();
  const Eigen::Index p = data.cols();
  const int G = model.num_components();
  const int q = model.q;
  if (!fixed.empty()) {
    if (static_cast<Eigen::Index>(fixed.size()) != n) throw InputError("fixed assignments length differs from n");
    for (int f : fixed) {
      if (f < -1 || f >= G) throw InputError("fixed assignment outside [0, G)");
    }
  }

  EStepCache cache;
  cache.zhat.resize(n, G);
  cache.log_density.resize(n, G);
  cache.a.resize(n, G);
  cache.b.resize(n, G);
  cache.c.resize(n, G);
  cache.e1.resize(G);
  cache.e2.resize(G);
  cache.e3.resize(G);
  cache.beta.resize(G);

  const double half_p = 0.5 * static_cast<double>(p);
  for (int g = 0; g < G; ++g) {
    const auto& comp = model.components[g];
    const FactoredPrecision prec(comp.scale(), kTiny);
    const Eigen::VectorXd s_alpha = prec.solve(comp.alpha);
    const double rho = comp.alpha.dot(s_alpha);
    // delta_i = r' Psi^-1 r - v' M^-1 v with v = Lambda' Psi^-1 r; u_i = M^-1 v = beta r_i.
    Eigen::VectorXd delta(n), cross(n);
    Eigen::MatrixXd u(q, n);
    for (Eigen::Index b = 0; b < n; b += kBlock) {
      const Eigen::Index m = std::min(kBlock, n - b);
      const Eigen::MatrixXd r = data.middleRows(b, m).rowwise() - comp.mu.transpose();
      const Eigen::MatrixXd v = prec.weighted_loadings_t() * r.transpose();
      u.middleCols(b, m) = prec.middle().solve(v);
      delta.segment(b, m) = r.array().square().matrix() * prec.psi_inv() -
                            (v.array() * u.middleCols(b, m).array()).colwise().sum().transpose().matrix();
      cross.segment(b, m) = r * s_alpha;
    }
    const Eigen::VectorXd beta_alpha = prec.beta() * comp.alpha;
    const Eigen::MatrixXd cond_cov = Eigen::MatrixXd::Identity(q, q) - prec.beta() * comp.loadings;
    const double log_k_prior = specfun::log_bessel_k(comp.lambda, comp.omega);
    const double nu = comp.lambda - half_p;

    cache.beta[g] = prec.beta();
    cache.e1[g].resize(q, n);
    cache.e2[g].resize(q, n);
    cache.e3[g].resize(q, q * n);
    const Eigen::MatrixXd ba_outer = beta_alpha * beta_alpha.transpose();

    for (Eigen::Index i = 0; i < n; ++i) {
      const ghd::Mahalanobis m{std::max(delta[i], 0.0), rho, cross[i]};
      gig::Moments mom{};
      try {
        const gig::GIGParams post(comp.omega + rho, comp.omega + m.delta, nu);
        const auto pair = specfun::log_bessel_k_pair(nu, post.omega());
        const double logf =
            ghd::log_density_kernel(p, m, prec.log_det(), comp.lambda, comp.omega, pair.log_k, log_k_prior);
        if (!std::isfinite(logf)) {
          std::ostringstream msg;
          msg << "non-finite density at observation " << i + 1 << ", component " << g + 1;
          throw NonFiniteDensity(static_cast<long>(i), g, msg.str());
        }
        cache.log_density(i, g) = logf;
        mom = gig::moments(post, pair, with_log_moment);
      } catch (const DomainError& e) {
        std::ostringstream msg;
        msg << "observation " << i + 1 << ", component " << g + 1 << ": " << e.what();
        throw NonFiniteDensity(static_cast<long>(i), g, msg.str());
      }
      cache.a(i, g) = mom.e_y;
      cache.b(i, g) = mom.e_inv_y;
      cache.c(i, g) = mom.e_log_y;

      const auto ui = u.col(i);
      cache.e1[g].col(i) = ui - mom.e_y * beta_alpha;
      cache.e2[g].col(i) = mom.e_inv_y * ui - beta_alpha;
      auto e3 = cache.e3[g].middleCols(i * q, q);
      e3 = cond_cov + mom.e_y * ba_outer;
      e3.noalias() += mom.e_inv_y * ui * ui.transpose();
      e3.noalias() -= ui * beta_alpha.transpose();
      e3.noalias() -= beta_alpha * ui.transpose();
    }
  }

  const Eigen::RowVectorXd log_pi = model.weights.array().log().transpose();
  const Eigen::MatrixXd joint = cache.log_density.rowwise() + log_pi;
  double loglik = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!fixed.empty() && fixed[i] >= 0) {
      const int g = fixed[i];
      cache.zhat.row(i).setZero();
      cache.zhat(i, g) = 1.0;
      loglik += joint(i, g);
      continue;
    }
    const double lse = log_sum_exp(joint.row(i));
    cache.zhat.row(i) = (joint.row(i).array() - lse).exp();
    cache.zhat.row(i) /= cache.zhat.row(i).sum();
    loglik += lse;
  }
  cache.loglik = loglik;
  return cache;
}

double log_likelihood(const Eigen::MatrixXd& data, const MixtureModel& model) {
  check_data(data, model);
  const Eigen::Index n = data.rows();
  const Eigen::Index p = data.cols();
  const int G = model.num_components();
  Eigen::MatrixXd joint(n, G);
  for (int g = 0; g < G; ++g) {
    const auto& comp = model.components[g];
    const FactoredPrecision prec(comp.scale(), kTiny);
    const Eigen::VectorXd s_alpha = prec.solve(comp.alpha);
    const double rho = comp.alpha.dot(s_alpha);
    const double log_pi = std::log(model.weights[g]);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::VectorXd r = data.row(i).transpose() - comp.mu;
      const ghd::Mahalanobis m{std::max(prec.quad_form(r), 0.0), rho, r.dot(s_alpha)};
      joint(i, g) = log_pi + ghd::log_density_kernel(p, m, prec.log_det(), comp.lambda, comp.omega);
    }
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) total += log_sum_exp(joint.row(i).transpose());
  return total;
}

double concentration_objective(double omega, double lambda, double A, double B, double C) {
  return -specfun::log_bessel_k(lambda, omega) + (lambda - 1.0) * C - 0.5 * omega * (A + B);
}

namespace {

// Fixed-point step for lambda, kept only if q_g does not drop; otherwise the
// step is halved toward the previous value.
double update_lambda(double lambda0, double omega0, double A, double B, double C) {
  const double slope = specfun::dlogk_dnu(lambda0, omega0);
  if (std::abs(slope) < 1e-12) return lambda0;
  const double base = concentration_objective(omega0, lambda0, A, B, C);
  double step = C * lambda0 / slope - lambda0;
  for (int k = 0; k <= 10; ++k, step *= 0.5) {
    const double trial = lambda0 + step;
    if (std::isfinite(trial) && concentration_objective(omega0, trial, A, B, C) >= base) return trial;
  }
  return lambda0;
}

double update_omega(double omega0, double lambda, double A, double B, double C, const CMOptions& opts) {
  const double grad = -specfun::dlogk_dx(lambda, omega0) - 0.5 * (A + B);
  const double hess = -specfun::d2logk_dx2(lambda, omega0);
  if (!(hess != 0.0) || !std::isfinite(grad) || !std::isfinite(hess)) return omega0;
  const double base = concentration_objective(omega0, lambda, A, B, C);
  double step = -grad / hess;
  for (int k = 0; k <= 10; ++k, step *= 0.5) {
    const double trial = omega0 + step;
    if (trial >= opts.omega_min && trial <= opts.omega_max &&
        concentration_objective(trial, lambda, A, B, C) >= base) {
      return trial;
    }
  }
  return omega0;
}

}  // namespace

MixtureModel cm_step_1(const Eigen::MatrixXd& data, const EStepCache& cache, const MixtureModel& model,
                       const CMOptions& opts) {
  check_data(data, model);
  const double n = static_cast<double>(data.rows());
  MixtureModel out = model;
  for (int g = 0; g < model.num_components(); ++g) {
    const auto z = cache.zhat.col(g);
    const double ng = z.sum();
    const double A = cache.A_g(g);
    const double B = cache.B_g(g);
    const double C = cache.C_g(g);
    const Eigen::VectorXd w_mu = z.array() * (A * cache.b.col(g).array() - 1.0);
    const double den = w_mu.sum();
    if (!(std::abs(den) >= 1e-12 * std::max(1.0, ng))) {
      std::ostringstream msg;
      msg << "component " << g + 1 << ": sum z (A b - 1) = " << den << " vanishes";
      throw DegenerateUpdate(msg.str());
    }
    const Eigen::VectorXd w_alpha = z.array() * (B - cache.b.col(g).array());
    auto& comp = out.components[g];
    comp.mu = data.transpose() * w_mu / den;
    comp.alpha = data.transpose() * w_alpha / den;
    out.weights[g] = ng / n;

    comp.lambda = update_lambda(model.components[g].lambda, model.components[g].omega, A, B, C);
    comp.omega = update_omega(model.components[g].omega, comp.lambda, A, B, C, opts);
  }
  out.weights /= out.weights.sum();
  return out;
}

MixtureModel cm_step_2(const Eigen::MatrixXd& data, const EStepCache& cache, const MixtureModel& model,
                       const CMOptions& opts) {
  check_data(data, model);
  const int q = model.q;
  MixtureModel out = model;
  for (int g = 0; g < model.num_components(); ++g) {
    auto& comp = out.components[g];
    const auto z = cache.zhat.col(g);
    const double ng = z.sum();
    const Eigen::Index p = data.cols();
    Eigen::MatrixXd s_re2 = Eigen::MatrixXd::Zero(p, q);  // sum z r E2'
    Eigen::VectorXd sum_b_r2 = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd sum_r = Eigen::VectorXd::Zero(p);
    const Eigen::VectorXd zb = z.cwiseProduct(cache.b.col(g));
    for (Eigen::Index b = 0; b < data.rows(); b += kBlock) {
      const Eigen::Index m = std::min(kBlock, data.rows() - b);
      const Eigen::MatrixXd r = data.middleRows(b, m).rowwise() - comp.mu.transpose();
      s_re2.noalias() += r.transpose() * (z.segment(b, m).asDiagonal() * cache.e2[g].middleCols(b, m).transpose());
      sum_b_r2.noalias() += r.array().square().matrix().transpose() * zb.segment(b, m);
      sum_r.noalias() += r.transpose() * z.segment(b, m);
    }
    const Eigen::VectorXd s_e1 = cache.e1[g] * z;  // q
    Eigen::MatrixXd s_e3 = Eigen::MatrixXd::Zero(q, q);
    for (Eigen::Index i = 0; i < data.rows(); ++i) s_e3 += z[i] * cache.e3_at(g, i);
    s_e3 = 0.5 * (s_e3 + s_e3.transpose());
    const Eigen::MatrixXd cross = s_re2 - comp.alpha * s_e1.transpose();  // p x q

    Eigen::LDLT<Eigen::MatrixXd> ldlt(s_e3);
    if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > 1e-13)) {
      const double ridge = 1e-10 * s_e3.trace() / q;
      s_e3.diagonal().array() += ridge;
      ldlt.compute(s_e3);
      if (opts.notes) {
        std::ostringstream msg;
        msg << "component " << g + 1 << ": sum z E3 near singular, ridge " << ridge << " added";
        opts.notes->push_back(msg.str());
      }
    }
    const Eigen::MatrixXd loadings = ldlt.solve(cross.transpose()).transpose();
    if (!loadings.allFinite()) throw DegenerateUpdate("component " + std::to_string(g + 1) + ": loadings not finite");

    const double sum_a = z.dot(cache.a.col(g));
    const Eigen::VectorXd lam_e1 = loadings * s_e1;
    const Eigen::VectorXd re2_l = s_re2.cwiseProduct(loadings).rowwise().sum();
    const Eigen::VectorXd le3l = (loadings * s_e3).cwiseProduct(loadings).rowwise().sum();
    Eigen::VectorXd noise = (sum_b_r2 - 2.0 * comp.alpha.cwiseProduct(sum_r) +
                             sum_a * comp.alpha.cwiseProduct(comp.alpha) - 2.0 * re2_l +
                             2.0 * comp.alpha.cwiseProduct(lam_e1) + le3l) /
                            ng;
    noise = noise.cwiseMax(opts.psi_floor);
    if (!noise.allFinite()) throw DegenerateUpdate("component " + std::to_string(g + 1) + ": noise not finite");
    comp.loadings = loadings;
    comp.noise = noise;
  }
  return out;
}

MixtureModel initialize_from_weights(const Eigen::MatrixXd& data, const Eigen::MatrixXd& weights, int q,
                                     double psi_floor) {
  const Eigen::Index n = data.rows();
  const Eigen::Index p = data.cols();
  const int G = static_cast<int>(weights.cols());
  if (weights.rows() != n) throw InputError("initial weights must have one row per observation");
  MixtureModel model;
  model.q = q;
  model.weights.resize(G);
  model.components.resize(G);
  for (int g = 0; g < G; ++g) {
    const auto w = weights.col(g);
    const double ng = w.sum();
    if (!(ng > 0.0)) throw DegenerateUpdate("component " + std::to_string(g + 1) + " starts empty");
    GHFAComponent comp;
    comp.mu = data.transpose() * w / ng;
    const Eigen::MatrixXd centered = data.rowwise() - comp.mu.transpose();
    const Eigen::MatrixXd cov = centered.transpose() * w.asDiagonal() * centered / ng;
    comp.noise = cov.diagonal().cwiseMax(psi_floor);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    comp.loadings.resize(p, q);
    for (int k = 0; k < q; ++k) {
      const Eigen::Index col = p - 1 - k;  // eigenvalues ascend
      comp.loadings.col(k) = eig.eigenvectors().col(col) * std::sqrt(std::max(eig.eigenvalues()[col], 0.0));
    }
    comp.alpha = Eigen::VectorXd::Zero(p);
    comp.lambda = -0.5;
    comp.omega = 1.0;
    model.weights[g] = ng;
    model.components[g] = std::move(comp);
  }
  model.weights /= model.weights.sum();
  return model;
}

namespace {

struct StartOutcome {
  StartDiagnostics diag;
  MixtureModel model;
  EStepCache cache;
  std::vector<double> trace;
};

void check_sizes(const EStepCache& cache, int q) {
  for (int g = 0; g < cache.num_components(); ++g) {
    const double ng = cache.n_g(g);
    if (ng < q + 1) {
      std::ostringstream msg;
      msg << "component " << g + 1 << " has n_g = " << ng << " < q + 1 = " << q + 1;
      throw DegenerateUpdate(msg.str());
    }
  }
}

// A component whose noise variances mostly sit on the floor is fitting a
// handful of rows exactly; the likelihood is then unbounded in practice.
void check_collapse(const MixtureModel& model, double psi_floor) {
  for (int g = 0; g < model.num_components(); ++g) {
    const auto& noise = model.components[g].noise;
    const auto at_floor = (noise.array() <= psi_floor * (1.0 + 1e-9)).count();
    if (2 * at_floor > noise.size()) {
      std::ostringstream msg;
      msg << "component " << g + 1 << " collapsed: " << at_floor << " of " << noise.size()
          << " noise variances at the floor";
      throw DegenerateUpdate(msg.str());
    }
  }
}

StartOutcome run_start(const Eigen::MatrixXd& data, MixtureModel model, const FitConfig& config,
                       const FixedAssignments& fixed, int start_index) {
  StartOutcome out;
  out.diag.start = start_index;
  CMOptions opts{config.psi_floor, config.omega_min, config.omega_max, &out.diag.notes};
  try {
    EStepCache cache = e_step(data, model, fixed);
    check_sizes(cache, model.q);
    out.trace.push_back(cache.loglik);
    int it = 0;
    bool converged = false;
    while (it < config.max_iter) {
      ++it;
      model = cm_step_1(data, cache, model, opts);
      cache = e_step(data, model, fixed, false);
      check_sizes(cache, model.q);
      model = cm_step_2(data, cache, model, opts);
      check_collapse(model, config.psi_floor);
      cache = e_step(data, model, fixed);
      check_sizes(cache, model.q);
      if (!std::isfinite(cache.loglik)) throw DegenerateUpdate("log-likelihood is not finite");
      out.trace.push_back(cache.loglik);
      const std::size_t k = out.trace.size();
      if (k >= 3) {
        selection::AitkenState st{{out.trace[k - 3], out.trace[k - 2], out.trace[k - 1]},
                                  config.epsilon,
                                  config.aitken_target};
        if (selection::aitken_converged(st)) {
          converged = true;
          break;
        }
      }
    }
    out.diag.ok = true;
    out.diag.loglik = cache.loglik;
    out.diag.iterations = it;
    out.diag.converged = converged;
    out.model = std::move(model);
    out.cache = std::move(cache);
  } catch (const std::exception& e) {
    out.diag.ok = false;
    out.diag.reason = e.what();
  }
  return out;
}

// Lexicographic row order (ties by key, then index); fitting in this order
// makes results independent of how the caller ordered the rows.
std::vector<Eigen::Index> canonical_order(const Eigen::MatrixXd& data, const std::vector<int>& key) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(data.rows()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index l, Eigen::Index r) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
      if (data(l, j) != data(r, j)) return data(l, j) < data(r, j);
    }
    if (!key.empty() && key[l] != key[r]) return key[l] < key[r];
    return false;
  });
  return order;
}

Eigen::MatrixXd hard_weights(const std::vector<int>& labels, int G) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()), G);
  for (std::size_t i = 0; i < labels.size(); ++i) w(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
  return w;
}

// Cluster ids renumbered in order of first occurrence, so that the same
// partition always yields the same component order.
std::vector<int> first_appearance(const std::vector<int>& labels, int G) {
  std::vector<int> map(static_cast<std::size_t>(G), -1);
  int next = 0;
  std::vector<int> out;
  out.reserve(labels.size());
  for (int l : labels) {
    if (map[l] < 0) map[l] = next++;
    out.push_back(map[l]);
  }
  return out;
}

template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::jthread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) fn(i);
    });
  }
}

// Shared driver over already canonically ordered rows; one start per
// initial membership matrix. Starts whose initial memberships coincide with an
// earlier start would retrace it bit for bit, so they are run once and copied.
FitReport fit_sorted(const Eigen::MatrixXd& data, int G, int q, const FitConfig& config,
                     const std::vector<Eigen::MatrixXd>& init_weights, const FixedAssignments& fixed) {
  const int n_starts = static_cast<int>(init_weights.size());
  std::vector<int> same_as(static_cast<std::size_t>(n_starts), -1);
  for (int s = 1; s < n_starts; ++s) {
    for (int t = 0; t < s && same_as[s] < 0; ++t) {
      if (same_as[t] < 0 && init_weights[s] == init_weights[t]) same_as[s] = t;
    }
  }
  std::vector<StartOutcome> outcomes(static_cast<std::size_t>(n_starts));
  parallel_for(n_starts, config.threads, [&](int s) {
    if (same_as[s] >= 0) return;
    try {
      outcomes[s] = run_start(data, initialize_from_weights(data, init_weights[s], q, config.psi_floor), config,
                              fixed, s);
    } catch (const std::exception& e) {
      outcomes[s].diag.start = s;
      outcomes[s].diag.ok = false;
      outcomes[s].diag.reason = std::string("initialization: ") + e.what();
    }
  });
  for (int s = 0; s < n_starts; ++s) {
    if (same_as[s] < 0) continue;
    outcomes[s].diag = outcomes[same_as[s]].diag;
    outcomes[s].diag.start = s;
    outcomes[s].diag.notes.push_back("same initial partition as start " + std::to_string(same_as[s] + 1));
  }

  int best = -1;
  for (int s = 0; s < n_starts; ++s) {
    if (outcomes[s].diag.ok && (best < 0 || outcomes[s].diag.loglik > outcomes[best].diag.loglik)) best = s;
  }
  FitReport report;
  for (const auto& o : outcomes) report.starts.push_back(o.diag);
  if (best < 0) {
    std::vector<std::string> reasons;
    for (const auto& o : outcomes) reasons.push_back("start " + std::to_string(o.diag.start + 1) + ": " + o.diag.reason);
    throw FitFailure("all " + std::to_string(n_starts) + " starts failed", std::move(reasons));
  }
  auto& win = outcomes[best];
  report.n = static_cast<int>(data.rows());
  report.p = data.cols();
  report.model = std::move(win.model);
  report.loglik = win.diag.loglik;
  report.bic = selection::bic(report.loglik, data.rows(), data.cols(), G, q);
  report.iterations = win.diag.iterations;
  report.converged = win.diag.converged;
  report.best_start = best;
  report.loglik_trace = std::move(win.trace);
  report.zhat = std::move(win.cache.zhat);
  report.labels.resize(static_cast<std::size_t>(data.rows()));
  report.responsibility.resize(static_cast<std::size_t>(data.rows()));
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    Eigen::Index arg = 0;
    const double mx = report.zhat.row(i).maxCoeff(&arg);  // first maximum wins ties
    report.labels[static_cast<std::size_t>(i)] = static_cast<int>(arg) + 1;
    report.responsibility[static_cast<std::size_t>(i)] = mx;
  }
  return report;
}

void restore_order(FitReport& report, const std::vector<Eigen::Index>& order) {
  const auto n = order.size();
  std::vector<int> labels(n);
  std::vector<double> resp(n);
  Eigen::MatrixXd zhat(report.zhat.rows(), report.zhat.cols());
  for (std::size_t k = 0; k < n; ++k) {
    const auto orig = static_cast<std::size_t>(order[k]);
    labels[orig] = report.labels[k];
    resp[orig] = report.responsibility[k];
    zhat.row(order[k]) = report.zhat.row(static_cast<Eigen::Index>(k));
  }
  report.labels = std::move(labels);
  report.responsibility = std::move(resp);
  report.zhat = std::move(zhat);
}

void check_fit_args(const Eigen::MatrixXd& data, int G, int q, const FitConfig& config) {
  if (G < 1) throw InputError("G must be at least 1");
  if (q < 1 || q >= data.cols()) throw InputError("need 1 <= q < p");
  if (data.rows() <= G) throw InputError("need more observations than components");
  if (!data.allFinite()) throw InputError("data contains non-finite values");
  if (!(config.epsilon > 0.0) || config.n_starts < 1 || config.max_iter < 1) {
    throw InputError("fit config: need epsilon > 0, n_starts >= 1, max_iter >= 1");
  }
}

}  // namespace

FitReport fit(const Eigen::MatrixXd& data, int G, int q, const FitConfig& config) {
  check_fit_args(data, G, q, config);
  std::vector<int> given;
  if (config.init == InitMethod::kGivenLabels) {
    if (static_cast<Eigen::Index>(config.initial_labels.size()) != data.rows()) {
      throw InputError("initial labels length differs from n");
    }
    for (int l : config.initial_labels) {
      if (l < 1 || l > G) throw InputError("initial labels must lie in [1, G]");
      given.push_back(l - 1);
    }
  }
  const auto order = canonical_order(data, given);
  const Eigen::MatrixXd sorted = data(order, Eigen::all);
  std::vector<int> sorted_given;
  for (auto idx : order) {
    if (!given.empty()) sorted_given.push_back(given[static_cast<std::size_t>(idx)]);
  }

  std::vector<Eigen::MatrixXd> init;
  if (config.init == InitMethod::kGivenLabels) {
    init.push_back(hard_weights(sorted_given, G));
  } else {
    for (int s = 0; s < config.n_starts; ++s) {
      RandomStream rng = make_stream(config.seed, "starts", static_cast<std::uint64_t>(s));
      if (config.init == InitMethod::kKMeans) {
        init.push_back(hard_weights(first_appearance(kmeans(sorted, G, rng).labels, G), G));
        continue;
      }
      Eigen::MatrixXd w(sorted.rows(), G);
      for (Eigen::Index i = 0; i < w.rows(); ++i) {
        for (int g = 0; g < G; ++g) w(i, g) = uniform_open(rng);
        w.row(i) /= w.row(i).sum();
      }
      init.push_back(std::move(w));
    }
  }
  FitReport report = fit_sorted(sorted, G, q, config, init, {});
  restore_order(report, order);
  return report;
}

FitReport fit_anchored(const Eigen::MatrixXd& data, int G, int q, const FitConfig& config,
                       const FixedAssignments& fixed, const Eigen::MatrixXd& init_weights) {
  check_fit_args(data, G, q, config);
  if (static_cast<Eigen::Index>(fixed.size()) != data.rows() || init_weights.rows() != data.rows() ||
      init_weights.cols() != G) {
    throw InputError("anchored fit: assignments/weights do not match the data");
  }
  const auto order = canonical_order(data, fixed);
  const Eigen::MatrixXd sorted = data(order, Eigen::all);
  const Eigen::MatrixXd sorted_w = init_weights(order, Eigen::all);
  FixedAssignments sorted_fixed;
  for (auto idx : order) sorted_fixed.push_back(fixed[static_cast<std::size_t>(idx)]);
  FitReport report = fit_sorted(sorted, G, q, config, {sorted_w}, sorted_fixed);
  restore_order(report, order);
  return report;
}

}  // namespace hyperfa::mghfa
