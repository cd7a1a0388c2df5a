#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

// Unit conventions used throughout the library:
//   frequencies in THz (linear, nu), angular frequencies in rad/ps,
//   times in ps, lengths in um, wave vectors in 1/um,
//   sheet densities in 1/m^2, hbar = 1 at the Hamiltonian level.

namespace mpp {

namespace constants {
// CODATA 2018, SI.
inline constexpr double elementary_charge = 1.602176634e-19;   // C
inline constexpr double electron_mass = 9.1093837015e-31;      // kg
inline constexpr double vacuum_permittivity = 8.8541878128e-12; // F/m
inline constexpr double reduced_planck = 1.054571817e-34;      // J s
} // namespace constants

/// Layer stack hosting the quantum wells. Lengths in um, density in 1/m^2.
struct MaterialStack {
  double eps_sub = 12.9;
  double eps_barrier = 12.9;
  double cap_thickness_um = 0.03;   // d entering the screening functions
  double stack_thickness_um = 0.0;  // t, total QW stack extension
  double metal_coverage = 0.5;      // delta in [0,1]
  double effective_mass_ratio = 0.067;
  int n_qw = 1;
  std::vector<double> qw_depths_um; // z below the surface, one per QW
  double rho_per_qw_m2 = 1.8e16;

  double rho_total_m2() const { return n_qw * rho_per_qw_m2; }
  /// Throws std::invalid_argument listing every violated invariant.
  void validate() const;
};

/// Lorentz phonon model for the GaAs substrate permittivity.
struct PhononModel {
  double eps_inf = 10.87;
  double nu_lo_thz = 8.839;
  double nu_to_thz = 8.124;
  double gamma_lo_thz = 0.0225;
  double gamma_to_thz = 0.0255;

  void validate() const;
};

/// eps_gated diverges at q = 0 (perfect metallic screening).
struct GatedScreeningDivergence : std::domain_error {
  GatedScreeningDivergence()
      : std::domain_error("eps_gated diverges at q = 0 (metallic screening)") {}
};

/// Effective dielectric function for a 2DEG below a bare surface.
double eps_ungated(double q_per_um, const MaterialStack& stack);

/// Effective dielectric function for a top-metallized 2DEG; throws
/// GatedScreeningDivergence at q = 0.
double eps_gated(double q_per_um, const MaterialStack& stack);

/// Coverage-weighted mix of gated/ungated screening plus the finite
/// stack-thickness correction eps_sub*q*t/2.
double eps_effective(double q_per_um, const MaterialStack& stack);

/// Complex phonon permittivity of GaAs at frequency nu (THz).
std::complex<double> eps_gaas(double nu_thz, const PhononModel& model);

} // namespace mpp
