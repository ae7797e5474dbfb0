#pragma once

#include <array>

namespace hyperfa::selection {

/// Free parameters of a G-component, q-factor model in p dimensions:
/// (G - 1) + G [3p + 2 + pq - q(q - 1)/2].
long free_parameters(long p, long G, long q);

/// 2 loglik - rho log n; larger is better.
double bic(double loglik, long n, long p, long G, long q);

/// Which iterate the Aitken limit is compared against.
enum class AitkenTarget {
  kLatest,    // l_inf - l^{(k+1)} < eps (default)
  kPrevious,  // l_inf - l^{(k)} < eps
};

/// The last three log-likelihood values l^{(k-1)}, l^{(k)}, l^{(k+1)}.
struct AitkenState {
  std::array<double, 3> values{};
  double epsilon = 1e-5;
  AitkenTarget target = AitkenTarget::kLatest;
};

/// a = (l2 - l1) / (l1 - l0), l_inf = l1 + (l2 - l1) / (1 - a).
/// Converged iff 0 <= l_inf - l_target < epsilon. A zero denominator
/// (flat trace) counts as converged.
bool aitken_converged(const AitkenState& state);

}  // namespace hyperfa::selection
