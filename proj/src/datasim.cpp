#include "hyperfa/datasim.hpp"

#include <cmath>
#include <map>
#include <utility>

#include "hyperfa/errors.hpp"
#include "hyperfa/ghd.hpp"
#include "hyperfa/random.hpp"

namespace hyperfa::datasim {

Family parse_family(const std::string& name) {
  if (name == "gaussian") return Family::kGaussian;
  if (name == "skew-normal" || name == "skewnormal" || name == "sn") return Family::kSkewNormal;
  if (name == "gh" || name == "ghd") return Family::kGH;
  throw InputError("unknown family '" + name + "' (expected gaussian, skew-normal or gh)");
}

std::string family_name(Family family) {
  switch (family) {
    case Family::kGaussian:
      return "gaussian";
    case Family::kSkewNormal:
      return "skew-normal";
    case Family::kGH:
      return "gh";
  }
  return "?";
}

namespace {

double uniform(RandomStream& rng, double lo, double hi) { return lo + (hi - lo) * uniform_open(rng); }

Eigen::MatrixXd make_scale(int p, bool correlated, RandomStream& rng) {
  Eigen::VectorXd diag(p);
  for (int j = 0; j < p; ++j) {
    double d = 0.0;
    while (!(d > 0.0)) d = 1.0 + uniform(rng, -0.9, 0.9);
    diag[j] = d;
  }
  if (!correlated) return diag.asDiagonal();
  Eigen::MatrixXd w(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) w(i, j) = standard_normal(rng);
  }
  Eigen::MatrixXd c = w * w.transpose() / p + Eigen::MatrixXd::Identity(p, p);
  const Eigen::VectorXd s = c.diagonal().cwiseSqrt().cwiseInverse();
  const Eigen::VectorXd root = diag.cwiseSqrt();
  return root.asDiagonal() * (s.asDiagonal() * c * s.asDiagonal()) * root.asDiagonal();
}

}  // namespace

SimData generate(const SimDesign& d) {
  if (d.p < 1 || d.G < 1 || d.n_per_component < 1) throw InputError("simulation counts must be positive");
  if (!(d.hypercube_side > 0.0)) throw InputError("hypercube side must be positive");
  if (!(0.0 <= d.skew_lo && d.skew_lo <= d.skew_hi)) throw InputError("invalid skewness range");
  SimData out;
  const Eigen::Index n = static_cast<Eigen::Index>(d.G) * d.n_per_component;
  out.data.resize(n, d.p);
  for (int g = 0; g < d.G; ++g) {
    RandomStream rng = make_stream(d.seed, "simulate", static_cast<std::uint64_t>(g));
    SimComponent comp;
    comp.mu.resize(d.p);
    for (int j = 0; j < d.p; ++j) comp.mu[j] = uniform(rng, 0.0, d.hypercube_side);
    comp.sigma = make_scale(d.p, d.random_correlation, rng);
    comp.alpha = Eigen::VectorXd::Zero(d.p);
    if (d.family != Family::kGaussian) {
      for (int j = 0; j < d.p; ++j) {
        const double mag = uniform(rng, d.skew_lo, d.skew_hi);
        comp.alpha[j] = uniform_open(rng) < 0.5 ? -mag : mag;
      }
    }

    Eigen::MatrixXd block(d.n_per_component, d.p);
    if (d.family == Family::kGH) {
      ghd::GHParams params{comp.mu, comp.alpha, comp.sigma, d.gh_lambda, d.gh_omega};
      block = ghd::sample(params, rng, static_cast<std::size_t>(d.n_per_component));
    } else {
      const Eigen::MatrixXd chol = comp.sigma.llt().matrixL();
      Eigen::VectorXd z(d.p);
      for (int i = 0; i < d.n_per_component; ++i) {
        for (int j = 0; j < d.p; ++j) z[j] = standard_normal(rng);
        Eigen::VectorXd x = comp.mu + chol * z;
        if (d.family == Family::kSkewNormal) x += std::abs(standard_normal(rng)) * comp.alpha;
        block.row(i) = x.transpose();
      }
    }
    out.data.middleRows(static_cast<Eigen::Index>(g) * d.n_per_component, d.n_per_component) = block;
    for (int i = 0; i < d.n_per_component; ++i) out.truth.push_back(g + 1);
    out.components.push_back(std::move(comp));
  }
  return out;
}

double ari(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) throw InputError("partitions have different lengths");
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> ra, rb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1.0;
    ra[a[i]] += 1.0;
    rb[b[i]] += 1.0;
  }
  auto pairs = [](double m) { return 0.5 * m * (m - 1.0); };
  double index = 0.0, sa = 0.0, sb = 0.0;
  for (const auto& [k, m] : joint) index += pairs(m);
  for (const auto& [k, m] : ra) sa += pairs(m);
  for (const auto& [k, m] : rb) sb += pairs(m);
  const double total = pairs(static_cast<double>(a.size()));
  const double expected = total > 0.0 ? sa * sb / total : 0.0;
  const double max_index = 0.5 * (sa + sb);
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

}  // namespace hyperfa::datasim
