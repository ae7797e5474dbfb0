#include "cli.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "hyperfa/classify.hpp"
#include "hyperfa/datasim.hpp"
#include "hyperfa/errors.hpp"
#include "hyperfa/io.hpp"
#include "hyperfa/mghfa.hpp"
#include "hyperfa/random.hpp"
#include "hyperfa/selection.hpp"
#include "json.hpp"

namespace hyperfa::cli {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";

struct Range {
  int lo = 0, hi = 0;
};

Range parse_range(const std::string& text, const char* flag) {
  Range r;
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      r.lo = r.hi = std::stoi(text);
    } else {
      r.lo = std::stoi(text.substr(0, colon));
      r.hi = std::stoi(text.substr(colon + 1));
    }
  } catch (const std::exception&) {
    throw InputError(std::string(flag) + ": expected N or LO:HI, got '" + text + "'");
  }
  if (r.lo < 1 || r.hi < r.lo) throw InputError(std::string(flag) + ": need 1 <= LO <= HI");
  return r;
}

int default_threads() {
  if (const char* env = std::getenv("HYPERFA_THREADS")) {
    try {
      const int t = std::stoi(env);
      if (t >= 1) return t;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

// Options shared by fit and classify.
struct FitFlags {
  std::string data;
  std::string out_dir = ".";
  int G = 0;
  std::string g_range;
  int q = 0;
  std::string q_range;
  int starts = 20;
  std::string init = "kmeans";
  std::uint64_t seed = 1;
  int max_iter = 1000;
  double epsilon = 1e-5;
  std::string aitken = "latest";
  double psi_floor = kNoiseFloor;
  int threads = 1;

  void add_to(CLI::App* app) {
    app->add_option("--data", data, "input CSV (header row; optional id/label columns)")->required();
    app->add_option("--out-dir", out_dir, "directory for the output artifacts");
    app->add_option("--q", q, "number of latent factors");
    app->add_option("--starts", starts, "number of k-means / random starts")->check(CLI::PositiveNumber);
    app->add_option("--init", init, "kmeans or random")->check(CLI::IsMember({"kmeans", "random"}));
    app->add_option("--seed", seed, "64-bit seed for every random stream");
    app->add_option("--max-iter", max_iter, "AECM iteration cap")->check(CLI::PositiveNumber);
    app->add_option("--epsilon", epsilon, "Aitken stopping threshold")->check(CLI::PositiveNumber);
    app->add_option("--aitken-target", aitken, "compare the Aitken limit with the latest or previous value")
        ->check(CLI::IsMember({"latest", "previous"}));
    app->add_option("--psi-floor", psi_floor, "lower bound on each noise variance")->check(CLI::PositiveNumber);
    app->add_option("--threads", threads, "concurrent starts / grid cells (default $HYPERFA_THREADS or 1)")
        ->check(CLI::PositiveNumber);
  }

  mghfa::FitConfig config() const {
    mghfa::FitConfig c;
    c.max_iter = max_iter;
    c.epsilon = epsilon;
    c.aitken_target = aitken == "previous" ? selection::AitkenTarget::kPrevious : selection::AitkenTarget::kLatest;
    c.n_starts = starts;
    c.init = init == "random" ? mghfa::InitMethod::kRandom : mghfa::InitMethod::kKMeans;
    c.seed = seed;
    c.psi_floor = psi_floor;
    c.threads = threads;
    return c;
  }

  json to_json() const {
    return {{"data", data},       {"out_dir", out_dir},   {"G", G},           {"g_range", g_range},
            {"q", q},             {"q_range", q_range},   {"starts", starts}, {"init", init},
            {"seed", seed},       {"max_iter", max_iter}, {"epsilon", epsilon}, {"aitken_target", aitken},
            {"psi_floor", psi_floor}, {"threads", threads}};
  }
};

std::string out_path(const std::string& dir, const char* name) { return (fs::path(dir) / name).string(); }

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory '" + dir + "': " + ec.message());
}

json versions() {
  std::ostringstream eigen;
  eigen << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION;
  return {{"hyperfa", kVersion}, {"eigen", eigen.str()}, {"compiler", __VERSION__}};
}

class Manifest {
 public:
  Manifest(std::string command, const std::vector<std::string>& args)
      : start_(std::chrono::steady_clock::now()) {
    doc_["command"] = std::move(command);
    doc_["argv"] = args;
    doc_["versions"] = versions();
  }
  json& operator[](const char* key) { return doc_[key]; }
  void fingerprint(const std::string& path) {
    doc_["dataset"] = {{"path", path}, {"sha256", io::sha256_hex(io::read_file(path))}};
  }
  void write(const std::string& dir) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    doc_["timings"] = {{"wall_seconds", secs}};
    io::write_file(out_path(dir, "manifest.json"), doc_.dump(2) + "\n");
  }

 private:
  json doc_;
  std::chrono::steady_clock::time_point start_;
};

void report_failure(const FitFailure& e, std::ostream& err) {
  err << "error: fit failed: " << e.what() << '\n';
  for (const auto& r : e.reasons()) err << "  " << r << '\n';
}

void write_report_artifacts(const std::string& dir, const io::Dataset& ds, const mghfa::FitReport& report) {
  std::vector<std::string> ids;
  for (Eigen::Index i = 0; i < ds.data.rows(); ++i) ids.push_back(ds.row_id(i));
  std::ostringstream labels;
  io::write_labels(labels, ids, report.labels, report.responsibility);
  io::write_file(out_path(dir, "labels.csv"), labels.str());
  io::write_file(out_path(dir, "model.json"), io::model_to_json(report.model, report.loglik, report.bic));
}

json start_summary(const mghfa::FitReport& report) {
  json starts = json::array();
  for (const auto& s : report.starts) {
    json j = {{"start", s.start + 1}, {"ok", s.ok}};
    if (s.ok) {
      j["loglik"] = s.loglik;
      j["iterations"] = s.iterations;
      j["converged"] = s.converged;
    } else {
      j["reason"] = s.reason;
    }
    if (!s.notes.empty()) j["notes"] = s.notes;
    starts.push_back(j);
  }
  return starts;
}

int cmd_fit(const FitFlags& f, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Manifest manifest("fit", args);
  manifest["config"] = f.to_json();
  const auto ds = io::read_csv(f.data);
  manifest.fingerprint(f.data);
  ensure_dir(f.out_dir);

  if ((f.G > 0) == !f.g_range.empty()) throw InputError("give exactly one of --G and --g-range");
  if ((f.q > 0) == !f.q_range.empty()) throw InputError("give exactly one of --q and --q-range");
  const Range gr = f.G > 0 ? Range{f.G, f.G} : parse_range(f.g_range, "--g-range");
  const Range qr = f.q > 0 ? Range{f.q, f.q} : parse_range(f.q_range, "--q-range");
  const auto config = f.config();
  const bool grid = !f.g_range.empty() || !f.q_range.empty();

  mghfa::FitReport report;
  try {
    if (grid) {
      auto result = selection::select(ds.data, selection::SelectionGrid::inclusive(gr.lo, gr.hi, qr.lo, qr.hi), config);
      std::ostringstream table;
      selection::write_bic_table(table, result.table);
      io::write_file(out_path(f.out_dir, "bic.csv"), table.str());
      for (const auto& row : result.table) {
        if (row.status.rfind("failed", 0) == 0) err << "warning: G=" << row.G << " q=" << row.q << " " << row.status << '\n';
      }
      report = std::move(result.best);
    } else {
      report = mghfa::fit(ds.data, gr.lo, qr.lo, config);
    }
  } catch (const FitFailure& e) {
    report_failure(e, err);
    return kFitError;
  } catch (const SelectionFailure& e) {
    err << "error: " << e.what() << '\n';
    return kFitError;
  }

  write_report_artifacts(f.out_dir, ds, report);
  manifest["result"] = {{"G", report.model.num_components()}, {"q", report.model.q},
                        {"loglik", report.loglik},            {"bic", report.bic},
                        {"iterations", report.iterations},    {"converged", report.converged},
                        {"best_start", report.best_start + 1}, {"starts", start_summary(report)}};
  manifest.write(f.out_dir);
  out << std::setprecision(10) << "G=" << report.model.num_components() << " q=" << report.model.q
      << " loglik=" << report.loglik << " bic=" << report.bic << " iterations=" << report.iterations
      << (report.converged ? "" : " (not converged)") << '\n';
  return kOk;
}

struct ClassifyFlags : FitFlags {
  std::optional<double> unlabel_frac;
  std::string truth;
};

int cmd_classify(const ClassifyFlags& f, const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err) {
  Manifest manifest("classify", args);
  auto cfg_json = f.to_json();
  cfg_json["unlabel_frac"] = f.unlabel_frac ? json(*f.unlabel_frac) : json(nullptr);
  cfg_json["truth"] = f.truth;
  manifest["config"] = cfg_json;
  const auto ds = io::read_csv(f.data);
  manifest.fingerprint(f.data);
  ensure_dir(f.out_dir);
  if (!ds.has_labels()) throw InputError(f.data + ": classification needs a 'label' column");
  if (f.q < 1) throw InputError("--q is required");

  std::vector<int> truth;
  classify::PartialLabels partial{ds.labels};
  if (f.unlabel_frac) {
    for (int l : ds.labels) {
      if (l == 0) throw InputError("--unlabel-frac needs every row labelled (the labels are the truth)");
    }
    RandomStream rng = make_stream(f.seed, "holdout");
    partial = classify::hold_out_unlabel(ds.labels, *f.unlabel_frac, rng);
    truth = ds.labels;
  }
  if (!f.truth.empty()) {
    truth = io::read_partition(f.truth);
    if (static_cast<Eigen::Index>(truth.size()) != ds.data.rows()) {
      throw InputError(f.truth + ": truth has " + std::to_string(truth.size()) + " rows, data has " +
                       std::to_string(ds.data.rows()));
    }
  }
  const int max_label = *std::max_element(ds.labels.begin(), ds.labels.end());
  const int G = f.G > 0 ? f.G : max_label;
  if (G < 1 || max_label > G) throw InputError("labels exceed --G");

  classify::ClassifyReport result;
  try {
    result = classify::fit_classify(ds.data, partial, G, f.q, f.config());
  } catch (const FitFailure& e) {
    report_failure(e, err);
    return kFitError;
  }

  std::vector<std::string> ids;
  std::vector<int> comp;
  std::vector<double> resp;
  for (std::size_t k = 0; k < result.rows.size(); ++k) {
    const auto r = result.rows[k];
    ids.push_back(ds.row_id(r));
    comp.push_back(result.predicted[k]);
    resp.push_back(result.fit.responsibility[static_cast<std::size_t>(r)]);
  }
  if (result.rows.empty()) err << "warning: no unlabelled rows; predictions file is empty\n";
  std::ostringstream pred;
  io::write_labels(pred, ids, comp, resp);
  io::write_file(out_path(f.out_dir, "predictions.csv"), pred.str());
  io::write_file(out_path(f.out_dir, "model.json"),
                 io::model_to_json(result.fit.model, result.fit.loglik, result.fit.bic));

  json res = {{"G", G},
              {"q", f.q},
              {"labelled", partial.labelled()},
              {"unlabelled", result.rows.size()},
              {"loglik", result.fit.loglik},
              {"iterations", result.fit.iterations},
              {"converged", result.fit.converged}};
  out << "unlabelled=" << result.rows.size() << " loglik=" << std::setprecision(10) << result.fit.loglik;
  if (!truth.empty() && !result.rows.empty()) {
    std::vector<int> held;
    for (auto r : result.rows) held.push_back(truth[static_cast<std::size_t>(r)]);
    const double a = datasim::ari(held, result.predicted);
    res["ari"] = a;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", a);
    out << " ari=" << buf;
  }
  out << '\n';
  manifest["result"] = res;
  manifest.write(f.out_dir);
  return kOk;
}

struct SimulateFlags {
  std::string family = "gaussian";
  int p = 10;
  int G = 2;
  int n = 200;
  std::uint64_t seed = 1;
  double side = 200.0;
  bool correlated = false;
  std::string out_dir = ".";
};

int cmd_simulate(const SimulateFlags& f, const std::vector<std::string>& args, std::ostream& out) {
  Manifest manifest("simulate", args);
  if (f.n % f.G != 0) throw InputError("--n must be a multiple of --G (components are equal-sized)");
  datasim::SimDesign design;
  design.family = datasim::parse_family(f.family);
  design.p = f.p;
  design.G = f.G;
  design.n_per_component = f.n / f.G;
  design.seed = f.seed;
  design.hypercube_side = f.side;
  design.random_correlation = f.correlated;
  const auto sim = datasim::generate(design);
  ensure_dir(f.out_dir);
  std::ostringstream data, truth;
  io::write_csv(data, sim.data);
  truth << "row_id,label\n";
  for (std::size_t i = 0; i < sim.truth.size(); ++i) truth << i + 1 << ',' << sim.truth[i] << '\n';
  io::write_file(out_path(f.out_dir, "data.csv"), data.str());
  io::write_file(out_path(f.out_dir, "truth.csv"), truth.str());
  manifest["config"] = {{"family", datasim::family_name(design.family)},
                        {"p", f.p},
                        {"G", f.G},
                        {"n", f.n},
                        {"seed", f.seed},
                        {"side", f.side},
                        {"random_correlation", f.correlated},
                        {"out_dir", f.out_dir}};
  manifest.write(f.out_dir);
  out << "wrote " << sim.data.rows() << " rows to " << out_path(f.out_dir, "data.csv") << '\n';
  return kOk;
}

int cmd_evaluate(const std::string& a, const std::string& b, std::ostream& out) {
  const auto pa = io::read_partition(a);
  const auto pb = io::read_partition(b);
  if (pa.size() != pb.size()) {
    throw InputError("partitions differ in length (" + std::to_string(pa.size()) + " vs " +
                     std::to_string(pb.size()) + ")");
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", datasim::ari(pa, pb));
  out << buf << '\n';
  return kOk;
}

int cmd_score(const std::string& model_path, const std::string& data_path, std::ostream& out) {
  const auto loaded = io::model_from_json(io::read_file(model_path));
  try {
    mghfa::validate(loaded.model, 0.0);
  } catch (const DomainError& e) {
    throw InputError(model_path + ": " + e.what());
  }
  const auto ds = io::read_csv(data_path);
  if (ds.data.cols() != loaded.model.dim()) throw InputError("data and model dimensions differ");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", mghfa::log_likelihood(ds.data, loaded.model));
  out << buf << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mixtures of generalized hyperbolic factor analyzers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  FitFlags fit_flags;
  fit_flags.threads = default_threads();
  auto* fit = app.add_subcommand("fit", "cluster a dataset, optionally selecting G and q by BIC");
  fit_flags.add_to(fit);
  fit->add_option("--G", fit_flags.G, "number of components");
  fit->add_option("--g-range", fit_flags.g_range, "component counts LO:HI to compare by BIC");
  fit->add_option("--q-range", fit_flags.q_range, "factor counts LO:HI to compare by BIC");

  ClassifyFlags cls_flags;
  cls_flags.threads = default_threads();
  auto* cls = app.add_subcommand("classify", "semi-supervised fit using the label column");
  cls_flags.add_to(cls);
  cls->add_option("--G", cls_flags.G, "number of classes (default: largest label)");
  cls->add_option("--unlabel-frac", cls_flags.unlabel_frac, "hide each label with this probability")
      ->check(CLI::Range(0.0, 1.0));
  cls->add_option("--truth", cls_flags.truth, "CSV of true classes for the unlabelled rows");

  SimulateFlags sim_flags;
  auto* sim = app.add_subcommand("simulate", "generate a synthetic mixture");
  sim->add_option("--family", sim_flags.family, "gaussian, skew-normal or gh");
  sim->add_option("--p", sim_flags.p, "dimension")->check(CLI::PositiveNumber);
  sim->add_option("--G", sim_flags.G, "components")->check(CLI::PositiveNumber);
  sim->add_option("--n", sim_flags.n, "total rows, split equally")->check(CLI::PositiveNumber);
  sim->add_option("--seed", sim_flags.seed, "seed");
  sim->add_option("--side", sim_flags.side, "hypercube side for the component locations");
  sim->add_flag("--random-correlation", sim_flags.correlated, "add off-diagonal correlation to each scale");
  sim->add_option("--out-dir", sim_flags.out_dir, "output directory");

  std::string eval_a, eval_b;
  auto* eval = app.add_subcommand("evaluate", "adjusted Rand index of two label CSVs");
  eval->add_option("first", eval_a)->required();
  eval->add_option("second", eval_b)->required();

  std::string score_model, score_data;
  auto* score = app.add_subcommand("score", "log-likelihood of a dataset under a saved model");
  score->add_option("--model", score_model)->required();
  score->add_option("--data", score_data)->required();

  std::string replay_manifest, replay_out;
  auto* replay = app.add_subcommand("replay", "rerun the command recorded in a manifest");
  replay->add_option("manifest", replay_manifest)->required();
  replay->add_option("--out-dir", replay_out, "write the artifacts here instead");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*fit) return cmd_fit(fit_flags, args, out, err);
    if (*cls) return cmd_classify(cls_flags, args, out, err);
    if (*sim) return cmd_simulate(sim_flags, args, out);
    if (*eval) return cmd_evaluate(eval_a, eval_b, out);
    if (*score) return cmd_score(score_model, score_data, out);
    if (*replay) {
      const json m = json::parse(io::read_file(replay_manifest));
      auto replayed = m.at("argv").get<std::vector<std::string>>();
      if (!replay_out.empty()) {
        auto it = std::find(replayed.begin(), replayed.end(), "--out-dir");
        if (it != replayed.end() && it + 1 != replayed.end()) {
          *(it + 1) = replay_out;
        } else {
          replayed.push_back("--out-dir");
          replayed.push_back(replay_out);
        }
      }
      return run(replayed, out, err);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFitError;
  }
  return kInputError;
}

}  // namespace hyperfa::cli
