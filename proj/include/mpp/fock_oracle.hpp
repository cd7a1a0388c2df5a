#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "mpp/hopfield.hpp"

namespace mpp {

/// Small instance of the coupled-boson Hamiltonian, truncated per mode.
/// Frequencies and couplings are angular (rad/ps, hbar = 1):
///   H = sum_i w_i a_i^dag a_i + sum_{i<k} g_ik (a_i + a_i^dag)(a_k + a_k^dag)
///       + sum_i d_i (a_i + a_i^dag)^2
struct TruncatedSystem {
  std::vector<double> omega;      // bare angular frequencies
  Eigen::MatrixXd coupling;       // symmetric g_ik, zero diagonal
  std::vector<double> diamagnetic; // d_i
  std::vector<int> n_max;         // Fock cutoff per mode

  int n_modes() const { return static_cast<int>(omega.size()); }
  long dimension() const;
  void validate() const;

  /// Truncation of a ModeSystem (cavity modes first), uniform cutoff.
  static TruncatedSystem from_mode_system(const ModeSystem& system, int n_max);
};

struct OracleGroundState {
  double energy = 0.0;          // rad/ps
  Eigen::VectorXd amplitudes;   // real ground-state vector, unit norm
  std::vector<int> dims;        // per-mode basis sizes (n_max + 1)
};

struct OracleObservables {
  std::vector<double> mean_n;                    // <a_i^dag a_i>
  std::vector<std::vector<double>> fock_marginal; // per mode
  std::vector<QuadratureCovariance> covariance;
};

Eigen::SparseMatrix<double> assemble_hamiltonian(const TruncatedSystem& system);

/// Lowest eigenpair via Lanczos with full reorthogonalization. Throws on
/// non-convergence (reports the residual norm).
OracleGroundState oracle_ground_state(const TruncatedSystem& system,
                                      int max_iterations = 600,
                                      double residual_tol = 1e-9);

OracleObservables oracle_observables(const TruncatedSystem& system,
                                     const OracleGroundState& state);

/// Doubles the cutoff until <a_0^dag a_0> changes by less than `tol`.
double converged_cavity_population(const ModeSystem& system, int initial_n_max,
                                   double tol = 1e-4);

} // namespace mpp
