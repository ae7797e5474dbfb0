#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "hyperfa/mghfa.hpp"

namespace hyperfa::io {

/// A numeric table with optional `id` and `label` columns (matched by name,
/// case-insensitively). Labels are 0 for unlabelled rows (empty or NA cell).
/// Integer labels are kept as given; any other labels are mapped to 1..K in
/// sorted order and their names kept in `label_names`.
struct Dataset {
  Eigen::MatrixXd data;
  std::vector<std::string> columns;
  std::vector<std::string> ids;  // empty when there is no id column
  std::vector<int> labels;       // empty when there is no label column
  std::vector<std::string> label_names;

  bool has_labels() const { return !labels.empty(); }
  std::string row_id(Eigen::Index i) const;  // id cell or 1-based row number
};

/// Throws InputError with 1-based line/column coordinates on malformed cells.
Dataset parse_csv(std::istream& in, const std::string& source = "<input>");
Dataset read_csv(const std::string& path);

/// Writes a numeric table with a header; truth labels, when given, go to a
/// trailing `label` column.
void write_csv(std::ostream& out, const Eigen::MatrixXd& data, const std::vector<int>& labels = {});

/// row_id,component,responsibility
void write_labels(std::ostream& out, const std::vector<std::string>& row_ids, const std::vector<int>& component,
                  const std::vector<double>& responsibility);

/// A partition from a CSV: the `component` or `label` column, otherwise the
/// last column. Rows are kept in file order.
std::vector<int> read_partition(const std::string& path);

constexpr int kModelSchemaVersion = 1;

std::string model_to_json(const mghfa::MixtureModel& model, double loglik, double bic, int indent = 2);

struct LoadedModel {
  mghfa::MixtureModel model;
  double loglik = 0.0;
  double bic = 0.0;
};

/// Throws InputError on a schema mismatch.
LoadedModel model_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace hyperfa::io
