#include "mpp/materials.hpp"

#include <cmath>
#include <sstream>

namespace mpp {

void MaterialStack::validate() const {
  std::ostringstream err;
  if (metal_coverage < 0.0 || metal_coverage > 1.0)
    err << "metal_coverage out of [0,1]; ";
  if (cap_thickness_um <= 0.0) err << "cap_thickness_um must be > 0; ";
  if (stack_thickness_um < 0.0) err << "stack_thickness_um must be >= 0; ";
  if (eps_sub < 1.0) err << "eps_sub must be >= 1; ";
  if (eps_barrier < 1.0) err << "eps_barrier must be >= 1; ";
  if (effective_mass_ratio <= 0.0) err << "effective_mass_ratio must be > 0; ";
  if (n_qw < 0) err << "n_qw must be >= 0; ";
  if (static_cast<int>(qw_depths_um.size()) != n_qw)
    err << "qw_depths_um length must equal n_qw; ";
  for (double z : qw_depths_um)
    if (z < 0.0) err << "qw depths must be >= 0; ";
  if (rho_per_qw_m2 < 0.0) err << "rho_per_qw_m2 must be >= 0; ";
  if (!err.str().empty()) throw std::invalid_argument("MaterialStack: " + err.str());
}

void PhononModel::validate() const {
  if (!(nu_lo_thz > nu_to_thz && nu_to_thz > 0.0))
    throw std::invalid_argument("PhononModel: requires nu_LO > nu_TO > 0");
  if (gamma_lo_thz < 0.0 || gamma_to_thz < 0.0)
    throw std::invalid_argument("PhononModel: damping rates must be >= 0");
  if (eps_inf <= 0.0) throw std::invalid_argument("PhononModel: eps_inf must be > 0");
}

double eps_ungated(double q_per_um, const MaterialStack& stack) {
  const double th = std::tanh(std::abs(q_per_um) * stack.cap_thickness_um);
  return stack.eps_sub / 2.0 +
         (stack.eps_barrier / 2.0) * (1.0 + stack.eps_barrier * th) /
             (stack.eps_barrier + th);
}

double eps_gated(double q_per_um, const MaterialStack& stack) {
  const double qd = std::abs(q_per_um) * stack.cap_thickness_um;
  if (qd == 0.0) throw GatedScreeningDivergence();
  return (stack.eps_sub + stack.eps_barrier / std::tanh(qd)) / 2.0;
}

double eps_effective(double q_per_um, const MaterialStack& stack) {
  const double q = std::abs(q_per_um);
  const double delta = stack.metal_coverage;
  const double gated = delta > 0.0 ? eps_gated(q, stack) : 0.0;
  return delta * gated + (1.0 - delta) * eps_ungated(q, stack) +
         stack.eps_sub * q * stack.stack_thickness_um / 2.0;
}

std::complex<double> eps_gaas(double nu_thz, const PhononModel& model) {
  const std::complex<double> i(0.0, 1.0);
  const double w = nu_thz;
  const std::complex<double> num =
      model.nu_lo_thz * model.nu_lo_thz - w * w + i * model.gamma_lo_thz * w;
  const std::complex<double> den =
      model.nu_to_thz * model.nu_to_thz - w * w + i * model.gamma_to_thz * w;
  return model.eps_inf * num / den;
}

} // namespace mpp
