#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hyperfa/mghfa.hpp"
#include "hyperfa/random.hpp"

namespace hyperfa::classify {

/// Class index in [1, G] per row, 0 for unlabelled.
struct PartialLabels {
  std::vector<int> labels;

  long labelled() const;
  std::vector<long> unlabelled_rows() const;  // 0-based, ascending
};

struct ClassifyReport {
  mghfa::FitReport fit;
  std::vector<long> rows;       // unlabelled rows (0-based)
  std::vector<int> predicted;   // class of each entry in `rows`
};

/// Each row becomes unlabelled iff its uniform draw falls below `fraction`.
/// One draw per row, in row order, so the result depends only on the stream.
PartialLabels hold_out_unlabel(const std::vector<int>& labels, double fraction, RandomStream& rng);

/// Fits with labelled rows anchored to their class (component g = class g).
/// With no labelled rows this is exactly mghfa::fit. Throws InputError when
/// a class in [1, G] has no labelled row.
ClassifyReport fit_classify(const Eigen::MatrixXd& data, const PartialLabels& labels, int G, int q,
                            const mghfa::FitConfig& config);

/// Labelled rows contribute log pi_g f(x_i | g) for their own class,
/// unlabelled rows the full mixture term.
double classification_log_likelihood(const Eigen::MatrixXd& data, const mghfa::MixtureModel& model,
                                     const PartialLabels& labels);

}  // namespace hyperfa::classify
