#pragma once

#include <string>

#include "mpp/coupling.hpp"
#include "mpp/dynamics.hpp"
#include "mpp/hopfield.hpp"
#include "mpp/plasmon.hpp"

namespace mpp {

enum class CouplingSource { Synthetic, File };

/// Full device description: layer stack, grating, resonator modes and the
/// near-field weights feeding the coupling matrix.
struct DeviceConfig {
  MaterialStack stack;
  double period_um = 30.0;
  int alpha_cut = 10;
  /// Depth entering the gated/ungated screening functions. Values <= 0 fall
  /// back to stack.cap_thickness_um.
  double screening_depth_um = 0.0;
  int n_cavity = 1;
  CouplingSource source = CouplingSource::Synthetic;
  SyntheticWeightModel synthetic;
  std::string weights_path; // read when source == File
  double global_scale_thz = 1.0;
  CavityOscillatorTable oscillators = CavityOscillatorTable::reference();

  void validate() const;
};

PlasmonLadder device_ladder(const DeviceConfig& device, const BiasPoint& bias);

/// Ladder + weights + aggregation -> coupled mode system. Matter modes are all
/// ladder entries with nonzero frequency; cavity frequencies come from the
/// first n_cavity oscillator rows.
ModeSystem build_mode_system(const DeviceConfig& device, const BiasPoint& bias);

/// Calibrated multi-QW reference device: 30 um period, alpha_c = 10, 20 nm QW
/// spacing below a 30 nm cap, screening depth and global coupling scale fixed
/// so the 12-QW device reaches <N_1> = 0.76 at nu_c = 0.52 THz.
DeviceConfig reference_device(int n_qw);

} // namespace mpp
