#pragma once

#include <stdexcept>
#include <vector>

#include "mpp/hopfield.hpp"

namespace mpp {

struct UnphysicalCovariance : std::domain_error {
  explicit UnphysicalCovariance(const std::string& what)
      : std::domain_error(what) {}
};

/// Single-mode Gaussian state, quadratures X = (a + a^dag)/sqrt(2),
/// P = (a - a^dag)/(i sqrt(2)), vacuum variance 1/2.
struct GaussianModeState {
  double var_x = 0.5;
  double var_p = 0.5;
  double cov_xp = 0.0;

  double det() const { return var_x * var_p - cov_xp * cov_xp; }
  double purity() const;
  double mean_photon_number() const { return 0.5 * (var_x + var_p - 1.0); }
  /// Throws UnphysicalCovariance if det V < 1/4 - 1e-9.
  void validate() const;

  static GaussianModeState vacuum() { return {}; }
  static GaussianModeState from_covariance(const QuadratureCovariance& c) {
    return {c.var_x, c.var_p, c.cov_xp};
  }
};

struct WignerGridSpec {
  double x_min = -4.0, x_max = 4.0;
  double p_min = -4.0, p_max = 4.0;
  int nx = 101, np = 101;
};

/// Row-major over x (rows) and p (columns), ranges inclusive.
struct WignerGrid {
  WignerGridSpec spec;
  std::vector<double> values;

  double at(int ix, int ip) const { return values[ix * spec.np + ip]; }
  double x_of(int ix) const;
  double p_of(int ip) const;
};

struct FockDistribution {
  std::vector<double> probabilities;

  int cutoff() const { return static_cast<int>(probabilities.size()) - 1; }
  double total() const;
  double mean() const;
};

WignerGrid wigner_grid(const GaussianModeState& state, const WignerGridSpec& spec);

/// Diagonal Fock populations of the squeezed-thermal state with covariance V:
/// V = S V_th S^T, realized by numerically exponentiating the squeeze
/// generator on the truncated thermal density matrix.
FockDistribution fock_probabilities(const GaussianModeState& state, int n_max);

/// Grows the cutoff (doubling) until the probability deficit drops below
/// `tail_tol`.
FockDistribution fock_probabilities_auto(const GaussianModeState& state,
                                         double tail_tol = 1e-6);

} // namespace mpp
