#pragma once

#include <vector>

#include "mpp/materials.hpp"

namespace mpp {

/// Magnetic bias expressed as a cyclotron frequency.
struct BiasPoint {
  double nu_c_thz = 0.0;

  static BiasPoint from_cyclotron(double nu_c_thz);
  static BiasPoint from_field(double b_tesla, double effective_mass_ratio);
  double field_tesla(double effective_mass_ratio) const;
};

struct LadderEntry {
  int alpha = 0;
  double q_per_um = 0.0;
  double nu_plasma_thz = 0.0;
  double nu_mp_thz = 0.0;
  bool bright = false;
  bool landau_damped = false;
};

/// Discretized magnetoplasmon mode set, entries ordered alpha = -alpha_cut..alpha_cut.
struct PlasmonLadder {
  double period_um = 30.0;
  int alpha_cut = 10;
  std::vector<LadderEntry> entries;

  const LadderEntry& at_alpha(int alpha) const;
};

/// q_x(alpha) = 2 pi alpha / L_x.
double q_of_alpha(int alpha, double period_um);

/// 2D plasmon frequency in THz; returns 0 at q = 0 (continuity limit).
double plasma_frequency_thz(double q_per_um, double rho2d_m2,
                            const MaterialStack& stack);

/// Magnetoplasmon frequency sqrt(nu_c^2 + nu_plasma^2).
double magnetoplasmon_frequency_thz(double nu_plasma_thz, double nu_c_thz);

/// Fermi velocity hbar*sqrt(2 pi rho)/m* in m/s.
double fermi_velocity_m_s(double rho2d_m2, double effective_mass_ratio);

/// True iff omega_MP < v_F |q| (mode sunk into the single-particle band).
bool is_landau_damped(double nu_mp_thz, double q_per_um, double rho2d_m2,
                      double effective_mass_ratio);

PlasmonLadder build_ladder(const MaterialStack& stack, double period_um,
                           int alpha_cut, const BiasPoint& bias);

} // namespace mpp
