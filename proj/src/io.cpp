#include "hyperfa/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "hyperfa/errors.hpp"
#include "json.hpp"

namespace hyperfa::io {
namespace {

using json = nlohmann::json;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// One record per call; quoted fields may contain commas, doubled quotes and newlines.
bool next_record(std::istream& in, std::vector<std::string>& fields, long& line) {
  fields.clear();
  std::string field;
  bool quoted = false, any = false;
  char ch;
  while (in.get(ch)) {
    any = true;
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get();
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line;
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(trim(field));
      field.clear();
    } else if (ch == '\n') {
      ++line;
      fields.push_back(trim(field));
      return true;
    } else {
      field += ch;
    }
  }
  if (!any) return false;
  fields.push_back(trim(field));
  return true;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* b = s.data();
  const char* e = b + s.size();
  if (*b == '+') ++b;
  const auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && ptr == e && std::isfinite(out);
}

bool is_missing(const std::string& s) {
  const auto l = lower(s);
  return l.empty() || l == "na" || l == "nan" || l == "?";
}

}  // namespace

std::string Dataset::row_id(Eigen::Index i) const {
  if (!ids.empty()) return ids[static_cast<std::size_t>(i)];
  return std::to_string(i + 1);
}

Dataset parse_csv(std::istream& in, const std::string& source) {
  long line = 1;
  std::vector<std::string> header;
  if (!next_record(in, header, line) || (header.size() == 1 && header[0].empty())) {
    throw InputError(source + ": missing header row");
  }
  if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0] = header[0].substr(3);
  int id_col = -1, label_col = -1;
  std::vector<int> numeric;
  Dataset ds;
  for (std::size_t j = 0; j < header.size(); ++j) {
    const auto name = lower(header[j]);
    if (name == "id" && id_col < 0) {
      id_col = static_cast<int>(j);
    } else if (name == "label" && label_col < 0) {
      label_col = static_cast<int>(j);
    } else {
      numeric.push_back(static_cast<int>(j));
      ds.columns.push_back(header[j]);
    }
  }
  if (numeric.empty()) throw InputError(source + ": no numeric columns");

  std::vector<std::vector<double>> rows;
  std::vector<std::string> raw_labels;
  std::vector<std::string> fields;
  long record_line = line;
  while (next_record(in, fields, line)) {
    if (fields.size() == 1 && fields[0].empty()) {
      record_line = line;
      continue;  // blank line
    }
    if (fields.size() != header.size()) {
      std::ostringstream msg;
      msg << source << ": line " << record_line << " has " << fields.size() << " fields, expected " << header.size();
      throw InputError(msg.str());
    }
    std::vector<double> row;
    for (std::size_t k = 0; k < numeric.size(); ++k) {
      const auto& cell = fields[static_cast<std::size_t>(numeric[k])];
      double v = 0.0;
      if (!parse_double(cell, v)) {
        std::ostringstream msg;
        msg << source << ": line " << record_line << ", column " << numeric[k] + 1 << " ("
            << header[static_cast<std::size_t>(numeric[k])] << "): not a finite number: '" << cell << "'";
        throw InputError(msg.str());
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
    if (id_col >= 0) ds.ids.push_back(fields[static_cast<std::size_t>(id_col)]);
    if (label_col >= 0) raw_labels.push_back(fields[static_cast<std::size_t>(label_col)]);
    record_line = line;
  }
  if (rows.empty()) throw InputError(source + ": no data rows");

  ds.data.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(numeric.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < numeric.size(); ++j) {
      ds.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }

  if (label_col >= 0) {
    bool integral = true;
    std::set<std::string> names;
    for (const auto& s : raw_labels) {
      if (is_missing(s)) continue;
      names.insert(s);
      int v = 0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size() || v < 1) integral = false;
    }
    std::map<std::string, int> code;
    if (!integral) {
      int k = 0;
      for (const auto& s : names) {
        code[s] = ++k;
        ds.label_names.push_back(s);
      }
    }
    for (const auto& s : raw_labels) {
      if (is_missing(s)) {
        ds.labels.push_back(0);
      } else if (integral) {
        ds.labels.push_back(std::stoi(s));
      } else {
        ds.labels.push_back(code[s]);
      }
    }
  }
  return ds;
}

Dataset read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return parse_csv(in, path);
}

void write_csv(std::ostream& out, const Eigen::MatrixXd& data, const std::vector<int>& labels) {
  for (Eigen::Index j = 0; j < data.cols(); ++j) out << (j ? "," : "") << 'x' << j + 1;
  if (!labels.empty()) out << ",label";
  out << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) out << (j ? "," : "") << data(i, j);
    if (!labels.empty()) out << ',' << labels[static_cast<std::size_t>(i)];
    out << '\n';
  }
}

void write_labels(std::ostream& out, const std::vector<std::string>& row_ids, const std::vector<int>& component,
                  const std::vector<double>& responsibility) {
  out << "row_id,component,responsibility\n" << std::setprecision(17);
  for (std::size_t i = 0; i < row_ids.size(); ++i) {
    out << row_ids[i] << ',' << component[i] << ',' << responsibility[i] << '\n';
  }
}

std::vector<int> read_partition(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  long line = 1;
  std::vector<std::string> header, fields;
  if (!next_record(in, header, line)) throw InputError(path + ": missing header row");
  std::size_t col = header.size() - 1;
  for (std::size_t j = 0; j < header.size(); ++j) {
    const auto name = lower(header[j]);
    if (name == "component" || name == "label") {
      col = j;
      break;
    }
  }
  std::vector<int> out;
  long record_line = line;
  while (next_record(in, fields, line)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != header.size()) {
      throw InputError(path + ": line " + std::to_string(record_line) + " has the wrong number of fields");
    }
    const auto& s = fields[col];
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw InputError(path + ": line " + std::to_string(record_line) + ", column " + std::to_string(col + 1) +
                       ": not an integer label: '" + s + "'");
    }
    out.push_back(v);
    record_line = line;
  }
  return out;
}

namespace {

json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json mat_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const Eigen::VectorXd r = m.row(i).transpose();
    rows.push_back(vec_json(r));
  }
  return rows;
}

Eigen::VectorXd json_vec(const json& j, Eigen::Index expected, const char* what) {
  const auto v = j.get<std::vector<double>>();
  if (expected >= 0 && static_cast<Eigen::Index>(v.size()) != expected) {
    throw InputError(std::string("model JSON: ") + what + " has the wrong length");
  }
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

std::string model_to_json(const mghfa::MixtureModel& model, double loglik, double bic, int indent) {
  json j;
  j["schema_version"] = kModelSchemaVersion;
  j["G"] = model.num_components();
  j["p"] = model.dim();
  j["q"] = model.q;
  j["weights"] = vec_json(model.weights);
  j["loglik"] = loglik;
  j["bic"] = bic;
  j["components"] = json::array();
  for (const auto& c : model.components) {
    j["components"].push_back({{"mu", vec_json(c.mu)},
                               {"alpha", vec_json(c.alpha)},
                               {"loadings", mat_json(c.loadings)},
                               {"noise", vec_json(c.noise)},
                               {"lambda", c.lambda},
                               {"omega", c.omega}});
  }
  return j.dump(indent) + "\n";
}

LoadedModel model_from_json(const std::string& text) {
  LoadedModel out;
  try {
    const json j = json::parse(text);
    if (j.at("schema_version").get<int>() != kModelSchemaVersion) {
      throw InputError("model JSON: unsupported schema_version " + j.at("schema_version").dump());
    }
    const int G = j.at("G").get<int>();
    const Eigen::Index p = j.at("p").get<Eigen::Index>();
    const int q = j.at("q").get<int>();
    out.model.q = q;
    out.model.weights = json_vec(j.at("weights"), G, "weights");
    out.loglik = j.at("loglik").get<double>();
    out.bic = j.at("bic").get<double>();
    const auto& comps = j.at("components");
    if (static_cast<int>(comps.size()) != G) throw InputError("model JSON: component count differs from G");
    for (const auto& c : comps) {
      mghfa::GHFAComponent comp;
      comp.mu = json_vec(c.at("mu"), p, "mu");
      comp.alpha = json_vec(c.at("alpha"), p, "alpha");
      comp.noise = json_vec(c.at("noise"), p, "noise");
      const auto& rows = c.at("loadings");
      if (static_cast<Eigen::Index>(rows.size()) != p) throw InputError("model JSON: loadings has the wrong shape");
      comp.loadings.resize(p, q);
      for (Eigen::Index i = 0; i < p; ++i) comp.loadings.row(i) = json_vec(rows[i], q, "loadings row").transpose();
      comp.lambda = c.at("lambda").get<double>();
      comp.omega = c.at("omega").get<double>();
      out.model.components.push_back(std::move(comp));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("model JSON: ") + e.what());
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << contents;
  if (!out) throw InputError("write to '" + path + "' failed");
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

}  // namespace hyperfa::io
