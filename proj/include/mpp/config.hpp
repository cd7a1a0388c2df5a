#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpp/device.hpp"
#include "mpp/dynamics.hpp"
#include "mpp/gaussian.hpp"

namespace mpp {

inline constexpr int kSchemaVersion = 1;

struct SweepGrid {
  double start_thz = 0.05;
  double stop_thz = 3.0;
  int points = 60;

  std::vector<double> values() const;
};

struct BiasConfig {
  double nu_c_thz = 0.52;
  std::optional<SweepGrid> sweep;
};

/// Canonical single light-matter pair at resonance; replaces the device
/// pipeline when present (ground-state/wigner/oracle studies).
struct SingleModeConfig {
  double nu_thz = 1.0;
  double eta = 1.0;

  ModeSystem mode_system() const {
    return ModeSystem::single_pair(nu_thz, nu_thz, eta * nu_thz);
  }
};

struct SolverConfig {
  IntegrationParams integration;
  DrivePulse pulse;
  double dip_target = 0.9;    // kappa_rad calibration target
  double nu_max_thz = 7.0;    // sweep spectral axis
  int nu_points = 701;
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  DeviceConfig device;
  std::optional<SingleModeConfig> single_mode;
  BiasConfig bias;
  SolverConfig solver;
  WignerGridSpec wigner;
  int wigner_mode_j = 1;
  int oracle_n_max = 40;
  std::string output_dir = "out";
};

/// Carries every validation problem found, not just the first.
struct ConfigError : std::runtime_error {
  std::vector<std::string> errors;

  explicit ConfigError(std::vector<std::string> errs);
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

/// FNV-1a over the raw config bytes, 16 hex digits.
std::string config_hash(const std::string& text);

std::string read_file(const std::string& path);

} // namespace mpp
