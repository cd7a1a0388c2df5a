#include "mpp/device.hpp"

#include <stdexcept>

namespace mpp {

void DeviceConfig::validate() const {
  stack.validate();
  oscillators.validate();
  if (!(period_um > 0.0))
    throw std::invalid_argument("grating period must be positive");
  if (alpha_cut < 0) throw std::invalid_argument("alpha_cut must be >= 0");
  if (n_cavity < 1) throw std::invalid_argument("n_cavity must be >= 1");
  if (n_cavity > static_cast<int>(oscillators.rows.size()))
    throw std::invalid_argument(
        "n_cavity exceeds the number of oscillator rows");
  if (!(global_scale_thz >= 0.0))
    throw std::invalid_argument("global coupling scale must be >= 0");
  if (source == CouplingSource::File && weights_path.empty())
    throw std::invalid_argument("file coupling source needs a weights path");
}

PlasmonLadder device_ladder(const DeviceConfig& device, const BiasPoint& bias) {
  device.validate();
  MaterialStack stack = device.stack;
  if (device.screening_depth_um > 0.0)
    stack.cap_thickness_um = device.screening_depth_um;
  return build_ladder(stack, device.period_um, device.alpha_cut, bias);
}

ModeSystem build_mode_system(const DeviceConfig& device, const BiasPoint& bias) {
  const PlasmonLadder ladder = device_ladder(device, bias);
  WeightProfile profile =
      device.source == CouplingSource::File
          ? load_weights_file(device.weights_path)
          : build_synthetic_profile(device.synthetic, device.n_cavity, ladder,
                                    device.stack.qw_depths_um);
  const CouplingMatrix coupling = aggregate_coupling(
      profile, device.global_scale_thz, device.n_cavity, ladder);

  ModeSystem system;
  for (int j = 0; j < device.n_cavity; ++j)
    system.cavity.push_back({j + 1, device.oscillators.rows[j].nu_thz});

  std::vector<int> kept_cols;
  for (std::size_t c = 0; c < ladder.entries.size(); ++c) {
    const auto& e = ladder.entries[c];
    if (e.nu_mp_thz > 0.0) {
      system.matter.push_back({e.alpha, e.nu_mp_thz});
      kept_cols.push_back(static_cast<int>(c));
    }
  }
  system.omega_r_thz.resize(device.n_cavity,
                            static_cast<int>(kept_cols.size()));
  for (int j = 0; j < device.n_cavity; ++j)
    for (std::size_t m = 0; m < kept_cols.size(); ++m)
      system.omega_r_thz(j, static_cast<int>(m)) =
          coupling.omega_r_thz(j, kept_cols[m]);

  system.validate();
  return system;
}

DeviceConfig reference_device(int n_qw) {
  DeviceConfig d;
  d.stack.n_qw = n_qw;
  d.stack.cap_thickness_um = 0.03;
  d.stack.stack_thickness_um = n_qw * 0.02;
  d.stack.qw_depths_um.resize(n_qw);
  for (int w = 0; w < n_qw; ++w) d.stack.qw_depths_um[w] = 0.03 + w * 0.02;
  d.period_um = 30.0;
  d.alpha_cut = 10;
  d.screening_depth_um = 0.1807809352;
  d.n_cavity = 1;
  d.synthetic.base[{1, 0}] = 0.1;
  d.global_scale_thz = 0.2470012463;
  return d;
}

} // namespace mpp
