#include "mpp/plasmon.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mpp {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

BiasPoint BiasPoint::from_cyclotron(double nu_c_thz) {
  if (nu_c_thz < 0.0) throw std::invalid_argument("nu_c must be >= 0");
  return BiasPoint{nu_c_thz};
}

BiasPoint BiasPoint::from_field(double b_tesla, double effective_mass_ratio) {
  if (b_tesla < 0.0) throw std::invalid_argument("B must be >= 0");
  const double m = effective_mass_ratio * constants::electron_mass;
  const double nu_hz = constants::elementary_charge * b_tesla / (two_pi * m);
  return BiasPoint{nu_hz * 1e-12};
}

double BiasPoint::field_tesla(double effective_mass_ratio) const {
  const double m = effective_mass_ratio * constants::electron_mass;
  return nu_c_thz * 1e12 * two_pi * m / constants::elementary_charge;
}

double q_of_alpha(int alpha, double period_um) {
  if (period_um <= 0.0) throw std::invalid_argument("period must be > 0");
  return two_pi * alpha / period_um;
}

double plasma_frequency_thz(double q_per_um, double rho2d_m2,
                            const MaterialStack& stack) {
  const double q = std::abs(q_per_um);
  if (q == 0.0 || rho2d_m2 == 0.0) return 0.0;
  const double eps = eps_effective(q, stack);
  const double q_si = q * 1e6;
  const double m = stack.effective_mass_ratio * constants::electron_mass;
  const double w2 = rho2d_m2 * constants::elementary_charge *
                    constants::elementary_charge * q_si /
                    (2.0 * m * constants::vacuum_permittivity * eps);
  return std::sqrt(w2) / two_pi * 1e-12;
}

double magnetoplasmon_frequency_thz(double nu_plasma_thz, double nu_c_thz) {
  return std::hypot(nu_plasma_thz, nu_c_thz);
}

double fermi_velocity_m_s(double rho2d_m2, double effective_mass_ratio) {
  const double m = effective_mass_ratio * constants::electron_mass;
  return constants::reduced_planck * std::sqrt(two_pi * rho2d_m2) / m;
}

bool is_landau_damped(double nu_mp_thz, double q_per_um, double rho2d_m2,
                      double effective_mass_ratio) {
  const double omega = two_pi * nu_mp_thz * 1e12;           // rad/s
  const double vf = fermi_velocity_m_s(rho2d_m2, effective_mass_ratio);
  return omega < vf * std::abs(q_per_um) * 1e6;
}

PlasmonLadder build_ladder(const MaterialStack& stack, double period_um,
                           int alpha_cut, const BiasPoint& bias) {
  if (alpha_cut < 0) throw std::invalid_argument("alpha_cut must be >= 0");
  stack.validate();
  PlasmonLadder ladder;
  ladder.period_um = period_um;
  ladder.alpha_cut = alpha_cut;
  ladder.entries.reserve(2 * alpha_cut + 1);
  const double rho = stack.rho_total_m2();
  for (int alpha = -alpha_cut; alpha <= alpha_cut; ++alpha) {
    LadderEntry e;
    e.alpha = alpha;
    e.q_per_um = q_of_alpha(alpha, period_um);
    e.nu_plasma_thz = plasma_frequency_thz(e.q_per_um, rho, stack);
    e.nu_mp_thz = magnetoplasmon_frequency_thz(e.nu_plasma_thz, bias.nu_c_thz);
    e.bright = alpha >= 0; // alpha < 0 carries the dark standing wave
    e.landau_damped = is_landau_damped(e.nu_mp_thz, e.q_per_um, rho,
                                       stack.effective_mass_ratio);
    ladder.entries.push_back(e);
  }
  return ladder;
}

const LadderEntry& PlasmonLadder::at_alpha(int alpha) const {
  const int idx = alpha + alpha_cut;
  if (idx < 0 || idx >= static_cast<int>(entries.size()))
    throw std::out_of_range("alpha outside ladder range");
  return entries[idx];
}

} // namespace mpp
