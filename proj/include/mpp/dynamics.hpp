#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "mpp/hopfield.hpp"

namespace mpp {

struct OscillatorRow {
  double nu_thz = 0.52;
  double gamma_thz = 0.08;  // amplitude decay rate, 1/ps
  double amplitude = 1.0;
  double phase_rad = 0.0;
};

/// Far-field oscillator model of the metasurface response.
struct CavityOscillatorTable {
  std::vector<OscillatorRow> rows;

  void validate() const;
  /// Five-oscillator parameter set of the reference resonator.
  static CavityOscillatorTable reference();
};

/// Single-cycle zero-mean drive: first derivative of a Gaussian.
struct DrivePulse {
  double t0_ps = 5.0;
  double sigma_ps = 0.15;
  double amplitude = 1.0;
};

/// E(t) on the given grid; throws if the window misses t0 +- 6 sigma.
std::vector<double> synthesize_pulse(const DrivePulse& pulse,
                                     const std::vector<double>& time_ps);

struct TimeTrace {
  double dt_ps = 0.0;
  std::vector<double> time_ps;
  Eigen::MatrixXcd cavity; // J x n samples of <a_j>(t)
  Eigen::MatrixXcd matter; // M x n samples of <b_alpha>(t)
  std::vector<double> drive;
};

struct IntegrationParams {
  double dt_ps = 0.002;
  double t_end_ps = 100.0;
  double gamma_mp_thz = 0.05;
  /// Cavity damping override; when empty the oscillator table rates apply.
  std::vector<double> gamma_cavity_thz;
};

/// Fixed-step RK4 of the mean-field equations. The oscillator table supplies
/// the per-mode damping and drive coupling A_j e^{i phi_j}; rows beyond the
/// coupled ModeSystem are integrated as bare damped oscillators.
TimeTrace integrate_eom(const ModeSystem& system,
                        const CavityOscillatorTable& table,
                        const IntegrationParams& params,
                        const DrivePulse& pulse);

/// Rerun with the couplings and drive of every cavity mode not listed in
/// `active_j` (1-based) zeroed out.
TimeTrace switch_off(const ModeSystem& system, const CavityOscillatorTable& table,
                     const IntegrationParams& params, const DrivePulse& pulse,
                     const std::vector<int>& active_j);

struct Spectrum {
  std::vector<double> nu_thz; // positive-frequency bins
  std::vector<double> amplitude;
  double bin_thz = 0.0;
};

/// Amplitude spectrum, zero-padded to the next power of two >= 4x the length.
Spectrum amplitude_spectrum(const std::vector<double>& samples, double dt_ps);

/// Indices of local maxima above `threshold_fraction` of the global maximum.
std::vector<int> spectral_peaks(const Spectrum& spectrum,
                                double threshold_fraction);

std::vector<double> far_field_time(const TimeTrace& trace);

struct TransmissionSpectrum {
  std::vector<double> nu_thz;
  std::vector<double> transmission;
  std::vector<bool> valid; // false where the drive spectrum has no support
  double kappa_rad = 0.0;
};

/// Radiative constant such that the bare-resonator fundamental dip reaches
/// `dip_target` (depth 1 - T_min).
double calibrate_kappa_rad(const CavityOscillatorTable& table,
                           const IntegrationParams& params,
                           const DrivePulse& pulse, double dip_target);

TransmissionSpectrum transmission_spectrum(const TimeTrace& trace,
                                           double kappa_rad);

struct EnergyChannels {
  std::vector<double> time_ps;
  Eigen::MatrixXd cavity;      // J x n, omega_j |alpha_j|^2
  Eigen::MatrixXd matter;      // M x n
  std::vector<double> interaction;
  std::vector<double> total;
};

EnergyChannels energy_channels(const TimeTrace& trace, const ModeSystem& system);

struct TransmissionMap {
  std::vector<double> nu_c_thz;          // rows
  std::vector<double> nu_thz;            // columns
  Eigen::MatrixXd transmission;          // |nu_c| x |nu|
  std::vector<std::vector<double>> eigenfrequencies; // overlay per nu_c
};

/// Builds the mode system per bias point via `system_factory`, integrates and
/// assembles one transmission column per nu_c; columns run concurrently.
TransmissionMap sweep_cyclotron(
    const std::function<ModeSystem(double nu_c_thz)>& system_factory,
    const CavityOscillatorTable& table, const IntegrationParams& params,
    const DrivePulse& pulse, const std::vector<double>& nu_c_grid,
    const std::vector<double>& nu_grid, double kappa_rad, int threads = 1);

} // namespace mpp
