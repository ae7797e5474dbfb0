#include "hyperfa/classify.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "hyperfa/errors.hpp"

namespace hyperfa::classify {

long PartialLabels::labelled() const {
  return static_cast<long>(std::count_if(labels.begin(), labels.end(), [](int l) { return l > 0; }));
}

std::vector<long> PartialLabels::unlabelled_rows() const {
  std::vector<long> rows;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 0) rows.push_back(static_cast<long>(i));
  }
  return rows;
}

PartialLabels hold_out_unlabel(const std::vector<int>& labels, double fraction, RandomStream& rng) {
  if (!(fraction >= 0.0 && fraction < 1.0)) throw InputError("unlabel fraction must lie in [0, 1)");
  PartialLabels out{labels};
  for (auto& l : out.labels) {
    if (uniform_open(rng) < fraction) l = 0;
  }
  return out;
}

namespace {

mghfa::FixedAssignments to_fixed(const PartialLabels& labels, int G, Eigen::Index n) {
  if (static_cast<Eigen::Index>(labels.labels.size()) != n) throw InputError("label vector length differs from n");
  mghfa::FixedAssignments fixed;
  std::vector<int> count(static_cast<std::size_t>(G), 0);
  for (int l : labels.labels) {
    if (l < 0 || l > G) throw InputError("class label " + std::to_string(l) + " outside [1, G]");
    fixed.push_back(l - 1);
    if (l > 0) ++count[static_cast<std::size_t>(l - 1)];
  }
  for (int g = 0; g < G; ++g) {
    if (count[static_cast<std::size_t>(g)] == 0) {
      throw InputError("class " + std::to_string(g + 1) + " has no labelled rows");
    }
  }
  return fixed;
}

}  // namespace

ClassifyReport fit_classify(const Eigen::MatrixXd& data, const PartialLabels& labels, int G, int q,
                            const mghfa::FitConfig& config) {
  ClassifyReport out;
  if (static_cast<Eigen::Index>(labels.labels.size()) != data.rows()) {
    throw InputError("label vector length differs from n");
  }
  if (labels.labelled() == 0) {
    out.fit = mghfa::fit(data, G, q, config);
  } else {
    const auto fixed = to_fixed(labels, G, data.rows());
    // Labelled rows seed their class; every other row starts at the nearest class mean.
    Eigen::MatrixXd means = Eigen::MatrixXd::Zero(G, data.cols());
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(G);
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      if (fixed[i] >= 0) {
        means.row(fixed[i]) += data.row(i);
        counts[fixed[i]] += 1.0;
      }
    }
    means.array().colwise() /= counts.array();
    Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(data.rows(), G);
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      int g = fixed[i];
      if (g < 0) {
        Eigen::Index arg = 0;
        (means.rowwise() - data.row(i)).rowwise().squaredNorm().minCoeff(&arg);
        g = static_cast<int>(arg);
      }
      weights(i, g) = 1.0;
    }
    out.fit = mghfa::fit_anchored(data, G, q, config, fixed, weights);
  }
  out.rows = labels.unlabelled_rows();
  for (long r : out.rows) out.predicted.push_back(out.fit.labels[static_cast<std::size_t>(r)]);
  return out;
}

double classification_log_likelihood(const Eigen::MatrixXd& data, const mghfa::MixtureModel& model,
                                     const PartialLabels& labels) {
  if (labels.labelled() == 0) return mghfa::log_likelihood(data, model);
  return mghfa::e_step(data, model, to_fixed(labels, model.num_components(), data.rows())).loglik;
}

}  // namespace hyperfa::classify
