#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpp/coupling.hpp"

namespace mpp {

struct CavityModeDef {
  int j = 1;
  double nu_thz = 0.52;
};

struct MatterModeDef {
  int alpha = 0;
  double nu_thz = 0.0;
};

/// Bare modes plus coupling table. omega_r_thz is J x M in linear THz;
/// angular factors are applied at Hamiltonian assembly.
struct ModeSystem {
  std::vector<CavityModeDef> cavity;
  std::vector<MatterModeDef> matter;
  Eigen::MatrixXd omega_r_thz;

  int n_cavity() const { return static_cast<int>(cavity.size()); }
  int n_matter() const { return static_cast<int>(matter.size()); }
  int n_modes() const { return n_cavity() + n_matter(); }

  /// D_j = sum_alpha Omega^2 / omega_MP(alpha), angular rad/ps.
  /// Throws if a coupled matter mode has zero frequency.
  std::vector<double> diamagnetic_rad_ps() const;
  void validate() const;

  static ModeSystem single_pair(double nu_cavity_thz, double nu_matter_thz,
                                double omega_r_thz);
};

struct InstabilityError : std::runtime_error {
  explicit InstabilityError(const std::string& what) : std::runtime_error(what) {}
};

/// One normal mode: frequency plus the Hopfield coefficient row
/// (w_1..w_J, x_1..x_M, y_1..y_J, z_1..z_M), symplectic norm +1.
struct Eigenmode {
  double nu_thz = 0.0;
  Eigen::VectorXcd coeff;
};

struct HopfieldSolution {
  int n_cavity = 0;
  int n_matter = 0;
  std::vector<Eigenmode> modes; // ascending frequency

  std::complex<double> w(int beta, int j_idx) const;
  std::complex<double> x(int beta, int m_idx) const;
  std::complex<double> y(int beta, int j_idx) const;
  std::complex<double> z(int beta, int m_idx) const;
  double photonic_weight(int beta) const;
  double symplectic_norm(int beta) const;
};

enum class PolaritonType { Dark, Lower, Upper };

struct PolaritonLabel {
  PolaritonType type = PolaritonType::Dark;
  int cavity_j = 0; // 1-based cavity attribution, 0 for dark
  int beta = -1;    // 0 = LP, 1.. = UP rank, negative for dark
};

struct Classification {
  std::vector<PolaritonLabel> labels; // aligned with solution.modes
  int count(PolaritonType t) const;
  int count(PolaritonType t, int cavity_j) const;
};

struct QuadratureCovariance {
  double var_x = 0.5;
  double var_p = 0.5;
  double cov_xp = 0.0;
};

struct GroundStateReport {
  std::vector<double> n_cavity;  // <a_j^dag a_j>
  std::vector<double> m_matter;  // <b_alpha^dag b_alpha>
  double n_total = 0.0;
  std::vector<double> eta;       // equivalent single-mode coupling per j
  std::vector<QuadratureCovariance> covariance; // per cavity mode
};

/// Heisenberg coefficient matrix for (a, b, a^dag, b^dag), rad/ps.
Eigen::MatrixXd build_dynamical_matrix(const ModeSystem& system);

HopfieldSolution bogoliubov_diagonalize(const ModeSystem& system);

Classification classify_polaritons(const HopfieldSolution& solution,
                                   const ModeSystem& system);

QuadratureCovariance quadrature_covariance(const HopfieldSolution& solution,
                                           int j_idx);

GroundStateReport ground_state_report(const HopfieldSolution& solution,
                                      const ModeSystem& system);

/// How the coupling constant follows the matter frequency in the single-mode
/// detuning study. FixedOmega keeps Omega = eta * omega_cav absolute;
/// SqrtMatter scales Omega ~ sqrt(omega_matter) (oscillator-strength sum rule,
/// the scaling of cyclotron-resonance coupling).
enum class CouplingScaling { FixedOmega, SqrtMatter };

/// Vacuum photon number of the resonant single-pair reference system
/// (omega_matter = omega_cav, Omega = eta * omega, D = Omega^2 / omega).
double single_mode_photon_number(double eta);

/// Same reference detuned: matter frequency at `matter_over_cavity` times the
/// cavity frequency, coupling scaled per `scaling`.
double single_mode_photon_number_detuned(double eta, double matter_over_cavity,
                                         CouplingScaling scaling);

/// Inverts single_mode_photon_number; bracketed bisection + secant refinement,
/// relative tolerance 1e-6.
double equivalent_eta(double n_photons);

} // namespace mpp
