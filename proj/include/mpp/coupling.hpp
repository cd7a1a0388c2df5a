#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mpp/plasmon.hpp"

namespace mpp {

/// One near-field amplitude sample: cavity mode j, MP index alpha, QW index w.
struct WeightEntry {
  int j = 1;
  int alpha = 0;
  int qw = 0;
  double amplitude = 0.0;
};

struct WeightProfile {
  std::vector<WeightEntry> entries;

  /// Throws std::invalid_argument on negative amplitudes, nonzero dark
  /// (alpha < 0) amplitudes, or duplicate (j, alpha, qw) keys.
  void validate() const;
};

/// Evanescent surrogate for the Fourier-transformed near-field data:
/// base amplitude per (j, |alpha|) decayed as exp(-|q| z) in growth direction.
struct SyntheticWeightModel {
  std::map<std::pair<int, int>, double> base; // (j, |alpha|) -> amplitude

  double base_for(int j, int abs_alpha) const;
};

/// Vacuum Rabi frequencies per (cavity mode, ladder entry), linear THz.
/// Columns follow the ladder ordering alpha = -alpha_cut..alpha_cut.
struct CouplingMatrix {
  Eigen::MatrixXd omega_r_thz; // J x (2 alpha_cut + 1)
  double global_scale_thz = 1.0;
};

/// Relative amplitude seen by a QW at depth z for ladder mode alpha.
double synthetic_weight(const SyntheticWeightModel& model, int j, int alpha,
                        double qw_depth_um, double q_per_um);

/// Full synthetic profile for cavity modes j = 1..n_cavity.
WeightProfile build_synthetic_profile(const SyntheticWeightModel& model,
                                      int n_cavity, const PlasmonLadder& ladder,
                                      const std::vector<double>& qw_depths_um);

/// Omega_{R,j,alpha} = scale * sqrt(sum_w a_{j,alpha,w}^2).
CouplingMatrix aggregate_coupling(const WeightProfile& profile,
                                  double global_scale_thz, int n_cavity,
                                  const PlasmonLadder& ladder);

/// Parses the weight CSV (header "j,alpha,qw,amplitude"). Parse errors name
/// the offending 1-based line.
WeightProfile load_weights(std::istream& in);
WeightProfile load_weights_file(const std::string& path);

} // namespace mpp
