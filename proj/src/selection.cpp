#include "hyperfa/selection.hpp"

#include <atomic>
#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <thread>

#include "hyperfa/errors.hpp"

namespace hyperfa::selection {

long free_parameters(long p, long G, long q) { return (G - 1) + G * (3 * p + 2 + p * q - q * (q - 1) / 2); }

double bic(double loglik, long n, long p, long G, long q) {
  return 2.0 * loglik - static_cast<double>(free_parameters(p, G, q)) * std::log(static_cast<double>(n));
}

bool aitken_converged(const AitkenState& state) {
  const auto [l0, l1, l2] = state.values;
  const double prev_step = l1 - l0;
  if (prev_step == 0.0) return true;
  const double a = (l2 - l1) / prev_step;
  if (a == 1.0) return false;
  const double l_inf = l1 + (l2 - l1) / (1.0 - a);
  const double target = state.target == AitkenTarget::kLatest ? l2 : l1;
  const double gap = l_inf - target;
  return gap >= 0.0 && gap < state.epsilon;
}

SelectionGrid SelectionGrid::inclusive(int g_lo, int g_hi, int q_lo, int q_hi) {
  SelectionGrid grid;
  for (int g = g_lo; g <= g_hi; ++g) grid.g_range.push_back(g);
  for (int q = q_lo; q <= q_hi; ++q) grid.q_range.push_back(q);
  return grid;
}

SelectionResult select(const Eigen::MatrixXd& data, const SelectionGrid& grid, const mghfa::FitConfig& config) {
  if (grid.g_range.empty() || grid.q_range.empty()) throw InputError("selection grid is empty");
  for (int q : grid.q_range) {
    if (q < 1 || q >= data.cols()) throw InputError("every q in the grid must satisfy 1 <= q < p");
  }
  struct Cell {
    int G, q;
    std::optional<mghfa::FitReport> report;
    std::string error;
  };
  std::vector<Cell> cells;
  for (int G : grid.g_range) {
    for (int q : grid.q_range) cells.push_back({G, q, std::nullopt, {}});
  }

  mghfa::FitConfig cell_config = config;
  const int workers = std::max(1, std::min<int>(config.threads, static_cast<int>(cells.size())));
  if (workers > 1) cell_config.threads = 1;
  auto run = [&](std::size_t k) {
    try {
      cells[k].report = mghfa::fit(data, cells[k].G, cells[k].q, cell_config);
    } catch (const std::exception& e) {
      cells[k].error = e.what();
    }
  };
  if (workers == 1) {
    for (std::size_t k = 0; k < cells.size(); ++k) run(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < cells.size(); k = next++) run(k);
      });
    }
  }

  SelectionResult result;
  int best = -1;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const auto& c = cells[k];
    BicRow row;
    row.G = c.G;
    row.q = c.q;
    row.rho = free_parameters(data.cols(), c.G, c.q);
    if (c.report) {
      row.loglik = c.report->loglik;
      row.bic = c.report->bic;
      row.iters = c.report->iterations;
      row.status = c.report->converged ? "converged" : "max_iter";
      const bool better = best < 0 || row.bic > result.table[best].bic ||
                          (row.bic == result.table[best].bic &&
                           (row.G < result.table[best].G || (row.G == result.table[best].G && row.q < result.table[best].q)));
      if (better) best = static_cast<int>(k);
    } else {
      row.loglik = std::nan("");
      row.bic = std::nan("");
      row.status = "failed: " + c.error;
    }
    result.table.push_back(row);
  }
  if (best < 0) throw SelectionFailure("every (G, q) cell failed");
  result.best = std::move(*cells[best].report);
  return result;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

}  // namespace

void write_bic_table(std::ostream& out, const std::vector<BicRow>& table) {
  out << "G,q,loglik,rho,bic,iters,status\n";
  out << std::setprecision(17);
  for (const auto& r : table) {
    out << r.G << ',' << r.q << ',' << r.loglik << ',' << r.rho << ',' << r.bic << ',' << r.iters << ','
        << csv_field(r.status) << '\n';
  }
}

}  // namespace hyperfa::selection
