#include "mpp/dynamics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace mpp {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void CavityOscillatorTable::validate() const {
  if (rows.empty()) throw std::invalid_argument("oscillator table is empty");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (!(r.nu_thz > 0.0))
      throw std::invalid_argument("oscillator " + std::to_string(i + 1) +
                                  ": frequency must be positive");
    if (!(r.gamma_thz >= 0.0))
      throw std::invalid_argument("oscillator " + std::to_string(i + 1) +
                                  ": damping must be non-negative");
    if (!(r.amplitude >= 0.0))
      throw std::invalid_argument("oscillator " + std::to_string(i + 1) +
                                  ": amplitude must be non-negative");
  }
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].nu_thz <= rows[i - 1].nu_thz)
      throw std::invalid_argument("oscillator frequencies must be ascending");
}

CavityOscillatorTable CavityOscillatorTable::reference() {
  CavityOscillatorTable t;
  t.rows = {
      {0.52, 0.08, 2.8, 0.0},
      {1.95, 0.80, 44.5, -0.14 * std::numbers::pi},
      {3.75, 0.12, 0.8, -0.25 * std::numbers::pi},
      {4.60, 0.30, 0.9, -0.60 * std::numbers::pi},
      {6.00, 0.30, 7.0, -0.14 * std::numbers::pi},
  };
  return t;
}

std::vector<double> synthesize_pulse(const DrivePulse& pulse,
                                     const std::vector<double>& time_ps) {
  if (time_ps.empty()) throw std::invalid_argument("empty time grid");
  if (!(pulse.sigma_ps > 0.0))
    throw std::invalid_argument("pulse width must be positive");
  const double lo = pulse.t0_ps - 6.0 * pulse.sigma_ps;
  const double hi = pulse.t0_ps + 6.0 * pulse.sigma_ps;
  if (time_ps.front() > lo || time_ps.back() < hi) {
    std::ostringstream msg;
    msg << "time window [" << time_ps.front() << ", " << time_ps.back()
        << "] ps does not cover the pulse support [" << lo << ", " << hi
        << "] ps";
    throw std::invalid_argument(msg.str());
  }
  std::vector<double> e(time_ps.size());
  const double s2 = pulse.sigma_ps * pulse.sigma_ps;
  for (std::size_t i = 0; i < time_ps.size(); ++i) {
    const double u = time_ps[i] - pulse.t0_ps;
    e[i] = -pulse.amplitude * u / s2 * std::exp(-0.5 * u * u / s2);
  }
  return e;
}

namespace {

double pulse_at(const DrivePulse& p, double t) {
  const double u = t - p.t0_ps;
  const double s2 = p.sigma_ps * p.sigma_ps;
  return -p.amplitude * u / s2 * std::exp(-0.5 * u * u / s2);
}

struct EomModel {
  int n_cav = 0;     // table rows
  int n_coupled = 0; // rows tied to the matter sector
  int n_mat = 0;
  std::vector<double> omega_cav;  // rad/ps
  std::vector<double> omega_mat;  // rad/ps
  std::vector<double> gamma_cav;  // 1/ps
  double gamma_mat = 0.0;
  std::vector<double> dia;        // rad/ps, per coupled row
  Eigen::MatrixXd coupling;       // rad/ps, n_coupled x n_mat
  std::vector<std::complex<double>> kappa;

  void derivative(const Eigen::VectorXcd& s, double drive,
                  Eigen::VectorXcd& ds) const {
    const std::complex<double> mi(0.0, -1.0);
    ds.resize(s.size());
    for (int j = 0; j < n_cav; ++j) {
      std::complex<double> h = omega_cav[j] * s[j];
      if (j < n_coupled) {
        h += 2.0 * dia[j] * (s[j] + std::conj(s[j]));
        for (int m = 0; m < n_mat; ++m)
          h += coupling(j, m) * (s[n_cav + m] + std::conj(s[n_cav + m]));
      }
      ds[j] = mi * h - gamma_cav[j] * s[j] + kappa[j] * drive;
    }
    for (int m = 0; m < n_mat; ++m) {
      std::complex<double> h = omega_mat[m] * s[n_cav + m];
      for (int j = 0; j < n_coupled; ++j)
        h += coupling(j, m) * (s[j] + std::conj(s[j]));
      ds[n_cav + m] = mi * h - gamma_mat * s[n_cav + m];
    }
  }
};

EomModel build_model(const ModeSystem& system, const CavityOscillatorTable& table,
                     const IntegrationParams& params) {
  system.validate();
  table.validate();
  EomModel m;
  m.n_cav = static_cast<int>(table.rows.size());
  m.n_coupled = system.n_cavity();
  m.n_mat = system.n_matter();
  if (m.n_coupled > m.n_cav)
    throw std::invalid_argument(
        "mode system has more cavity modes than the oscillator table");
  m.omega_cav.resize(m.n_cav);
  m.gamma_cav.resize(m.n_cav);
  m.kappa.resize(m.n_cav);
  for (int j = 0; j < m.n_cav; ++j) {
    const double nu =
        j < m.n_coupled ? system.cavity[j].nu_thz : table.rows[j].nu_thz;
    m.omega_cav[j] = kTwoPi * nu;
    m.gamma_cav[j] = j < static_cast<int>(params.gamma_cavity_thz.size())
                         ? params.gamma_cavity_thz[j]
                         : table.rows[j].gamma_thz;
    m.kappa[j] = std::polar(table.rows[j].amplitude, table.rows[j].phase_rad);
  }
  m.omega_mat.resize(m.n_mat);
  for (int a = 0; a < m.n_mat; ++a) m.omega_mat[a] = kTwoPi * system.matter[a].nu_thz;
  m.gamma_mat = params.gamma_mp_thz;
  m.coupling = kTwoPi * system.omega_r_thz;
  m.dia.assign(m.n_coupled, 0.0);
  if (m.n_mat > 0) {
    const auto d = system.diamagnetic_rad_ps();
    for (int j = 0; j < m.n_coupled; ++j) m.dia[j] = d[j];
  }
  return m;
}

TimeTrace run_model(const EomModel& model, const IntegrationParams& params,
                    const DrivePulse& pulse) {
  double nu_max = 0.0;
  for (double w : model.omega_cav) nu_max = std::max(nu_max, w / kTwoPi);
  for (double w : model.omega_mat) nu_max = std::max(nu_max, w / kTwoPi);
  if (!(params.dt_ps > 0.0) || !(params.t_end_ps > params.dt_ps))
    throw std::invalid_argument("bad integration window");
  const double dt_limit = 1.0 / (50.0 * nu_max);
  if (params.dt_ps > dt_limit) {
    std::ostringstream msg;
    msg << "refusing to integrate: dt = " << params.dt_ps
        << " ps exceeds 1/(50 nu_max) = " << dt_limit
        << " ps for nu_max = " << nu_max << " THz";
    throw std::invalid_argument(msg.str());
  }

  const int n = static_cast<int>(std::floor(params.t_end_ps / params.dt_ps)) + 1;
  TimeTrace trace;
  trace.dt_ps = params.dt_ps;
  trace.time_ps.resize(n);
  trace.drive.resize(n);
  trace.cavity.setZero(model.n_cav, n);
  trace.matter.setZero(model.n_mat, n);

  Eigen::VectorXcd s = Eigen::VectorXcd::Zero(model.n_cav + model.n_mat);
  Eigen::VectorXcd k1, k2, k3, k4, tmp;
  const double dt = params.dt_ps;
  for (int i = 0; i < n; ++i) {
    const double t = i * dt;
    trace.time_ps[i] = t;
    trace.drive[i] = pulse_at(pulse, t);
    trace.cavity.col(i) = s.head(model.n_cav);
    if (model.n_mat > 0) trace.matter.col(i) = s.tail(model.n_mat);
    if (!s.allFinite()) {
      std::ostringstream msg;
      msg << "integration diverged at t = " << t << " ps";
      throw std::runtime_error(msg.str());
    }
    if (i + 1 == n) break;
    model.derivative(s, trace.drive[i], k1);
    tmp = s + 0.5 * dt * k1;
    model.derivative(tmp, pulse_at(pulse, t + 0.5 * dt), k2);
    tmp = s + 0.5 * dt * k2;
    model.derivative(tmp, pulse_at(pulse, t + 0.5 * dt), k3);
    tmp = s + dt * k3;
    model.derivative(tmp, pulse_at(pulse, t + dt), k4);
    s += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return trace;
}

} // namespace

TimeTrace integrate_eom(const ModeSystem& system,
                        const CavityOscillatorTable& table,
                        const IntegrationParams& params,
                        const DrivePulse& pulse) {
  return run_model(build_model(system, table, params), params, pulse);
}

TimeTrace switch_off(const ModeSystem& system, const CavityOscillatorTable& table,
                     const IntegrationParams& params, const DrivePulse& pulse,
                     const std::vector<int>& active_j) {
  auto model = build_model(system, table, params);
  auto keep = [&](int j1) {
    return std::find(active_j.begin(), active_j.end(), j1) != active_j.end();
  };
  for (int j = 0; j < model.n_cav; ++j) {
    if (keep(j + 1)) continue;
    model.kappa[j] = 0.0;
    if (j < model.n_coupled) {
      model.coupling.row(j).setZero();
      model.dia[j] = 0.0;
    }
  }
  return run_model(model, params, pulse);
}

namespace {

std::size_t padded_length(std::size_t n) {
  std::size_t p = 1;
  while (p < 4 * n) p <<= 1;
  return p;
}

std::vector<std::complex<double>> half_spectrum(const std::vector<double>& x,
                                                std::size_t padded) {
  std::vector<double> in(padded, 0.0);
  std::copy(x.begin(), x.end(), in.begin());
  std::vector<std::complex<double>> out(padded / 2 + 1);
  fftw_plan plan = fftw_plan_dft_r2c_1d(
      static_cast<int>(padded), in.data(),
      reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  return out;
}

} // namespace

Spectrum amplitude_spectrum(const std::vector<double>& samples, double dt_ps) {
  if (samples.size() < 2) throw std::invalid_argument("too few samples");
  if (!(dt_ps > 0.0)) throw std::invalid_argument("dt must be positive");
  const std::size_t padded = padded_length(samples.size());
  auto out = half_spectrum(samples, padded);
  Spectrum s;
  s.bin_thz = 1.0 / (static_cast<double>(padded) * dt_ps);
  s.nu_thz.resize(out.size());
  s.amplitude.resize(out.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    s.nu_thz[k] = static_cast<double>(k) * s.bin_thz;
    s.amplitude[k] = std::abs(out[k]) * dt_ps;
  }
  return s;
}

std::vector<int> spectral_peaks(const Spectrum& spectrum,
                                double threshold_fraction) {
  std::vector<int> peaks;
  const auto& a = spectrum.amplitude;
  if (a.size() < 3) return peaks;
  const double peak = *std::max_element(a.begin(), a.end());
  const double floor = threshold_fraction * peak;
  for (std::size_t i = 1; i + 1 < a.size(); ++i)
    if (a[i] > floor && a[i] > a[i - 1] && a[i] >= a[i + 1])
      peaks.push_back(static_cast<int>(i));
  return peaks;
}

std::vector<double> far_field_time(const TimeTrace& trace) {
  std::vector<double> e(trace.time_ps.size(), 0.0);
  for (std::size_t i = 0; i < e.size(); ++i)
    e[i] = trace.cavity.col(static_cast<int>(i)).real().sum();
  return e;
}

TransmissionSpectrum transmission_spectrum(const TimeTrace& trace,
                                           double kappa_rad) {
  const std::size_t padded = padded_length(trace.time_ps.size());
  auto f_drive = half_spectrum(trace.drive, padded);
  auto f_rad = half_spectrum(far_field_time(trace), padded);
  TransmissionSpectrum t;
  t.kappa_rad = kappa_rad;
  const double bin = 1.0 / (static_cast<double>(padded) * trace.dt_ps);
  double drive_max = 0.0;
  for (const auto& c : f_drive) drive_max = std::max(drive_max, std::abs(c));
  t.nu_thz.resize(f_drive.size());
  t.transmission.resize(f_drive.size());
  t.valid.resize(f_drive.size());
  for (std::size_t k = 0; k < f_drive.size(); ++k) {
    t.nu_thz[k] = static_cast<double>(k) * bin;
    const double mag = std::abs(f_drive[k]);
    t.valid[k] = mag > 1e-6 * drive_max;
    t.transmission[k] =
        t.valid[k] ? std::abs(f_drive[k] - kappa_rad * f_rad[k]) / mag : 1.0;
  }
  return t;
}

namespace {

ModeSystem bare_system() {
  ModeSystem s; // no matter sector: every table row integrates uncoupled
  return s;
}

} // namespace

double calibrate_kappa_rad(const CavityOscillatorTable& table,
                           const IntegrationParams& params,
                           const DrivePulse& pulse, double dip_target) {
  if (!(dip_target > 0.0 && dip_target < 1.0))
    throw std::invalid_argument("dip target must lie in (0, 1)");
  // the dip is non-monotone in kappa (overcoupling shallows it again), so
  // integrate and transform once, locate the kappa that maximizes the dip,
  // then bisect on the rising branch below it
  auto trace = integrate_eom(bare_system(), table, params, pulse);
  const std::size_t padded = padded_length(trace.time_ps.size());
  const auto f_drive = half_spectrum(trace.drive, padded);
  const auto f_rad = half_spectrum(far_field_time(trace), padded);
  const double bin = 1.0 / (static_cast<double>(padded) * trace.dt_ps);
  const double nu0 = table.rows.front().nu_thz;
  const double halfwidth = std::max(5.0 * table.rows.front().gamma_thz, 0.2);
  double drive_max = 0.0;
  for (const auto& c : f_drive) drive_max = std::max(drive_max, std::abs(c));
  auto dip = [&](double kappa) {
    double tmin = 1.0;
    for (std::size_t k = 0; k < f_drive.size(); ++k) {
      const double mag = std::abs(f_drive[k]);
      if (mag <= 1e-6 * drive_max ||
          std::abs(static_cast<double>(k) * bin - nu0) >= halfwidth)
        continue;
      tmin = std::min(tmin, std::abs(f_drive[k] - kappa * f_rad[k]) / mag);
    }
    return 1.0 - tmin;
  };
  double best_k = 1e-4, best_d = dip(best_k);
  for (double k = 2e-4; k <= 1e3; k *= 1.25) {
    const double d = dip(k);
    if (d > best_d) {
      best_d = d;
      best_k = k;
    }
  }
  double a = best_k / 1.25, b = best_k * 1.25;
  for (int it = 0; it < 120; ++it) {
    const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
    if (dip(m1) < dip(m2))
      a = m1;
    else
      b = m2;
  }
  best_k = 0.5 * (a + b);
  if (dip(best_k) < dip_target) throw std::runtime_error("dip target unreachable");
  double lo = 0.0, hi = best_k;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (dip(mid) < dip_target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

EnergyChannels energy_channels(const TimeTrace& trace, const ModeSystem& system) {
  const int n = static_cast<int>(trace.time_ps.size());
  const int jc = system.n_cavity();
  const int nm = system.n_matter();
  if (trace.cavity.rows() < jc || trace.matter.rows() != nm)
    throw std::invalid_argument("trace does not match the mode system");
  EnergyChannels e;
  e.time_ps = trace.time_ps;
  e.cavity.setZero(trace.cavity.rows(), n);
  e.matter.setZero(nm, n);
  e.interaction.assign(n, 0.0);
  e.total.assign(n, 0.0);
  std::vector<double> dia(jc, 0.0);
  if (nm > 0) dia = system.diamagnetic_rad_ps();
  for (int i = 0; i < n; ++i) {
    double total = 0.0;
    for (int j = 0; j < trace.cavity.rows(); ++j) {
      const double nu = j < jc ? system.cavity[j].nu_thz : 0.0;
      const double w = j < jc ? kTwoPi * nu : 0.0;
      const std::complex<double> a = trace.cavity(j, i);
      double ej = (j < jc ? w : 0.0) * std::norm(a);
      if (j >= jc) ej = 0.0; // uncoupled backbone rows carry no tracked energy
      e.cavity(j, i) = ej;
      total += ej;
    }
    for (int m = 0; m < nm; ++m) {
      const double w = kTwoPi * system.matter[m].nu_thz;
      e.matter(m, i) = w * std::norm(trace.matter(m, i));
      total += e.matter(m, i);
    }
    double inter = 0.0;
    for (int j = 0; j < jc; ++j) {
      const double xa = 2.0 * trace.cavity(j, i).real();
      for (int m = 0; m < nm; ++m)
        inter += kTwoPi * system.omega_r_thz(j, m) * xa *
                 2.0 * trace.matter(m, i).real();
      inter += dia[j] * xa * xa;
    }
    e.interaction[i] = inter;
    e.total[i] = total + inter;
  }
  return e;
}

TransmissionMap sweep_cyclotron(
    const std::function<ModeSystem(double nu_c_thz)>& system_factory,
    const CavityOscillatorTable& table, const IntegrationParams& params,
    const DrivePulse& pulse, const std::vector<double>& nu_c_grid,
    const std::vector<double>& nu_grid, double kappa_rad, int threads) {
  if (nu_c_grid.empty() || nu_grid.empty())
    throw std::invalid_argument("empty sweep grid");
  threads = std::max(1, threads);

  TransmissionMap map;
  map.nu_c_thz = nu_c_grid;
  map.nu_thz = nu_grid;
  map.transmission.setZero(static_cast<int>(nu_c_grid.size()),
                           static_cast<int>(nu_grid.size()));
  map.eigenfrequencies.resize(nu_c_grid.size());

  auto column = [&](int row) {
    const ModeSystem system = system_factory(nu_c_grid[row]);
    auto trace = integrate_eom(system, table, params, pulse);
    auto t = transmission_spectrum(trace, kappa_rad);
    for (std::size_t k = 0; k < nu_grid.size(); ++k) {
      const double nu = nu_grid[k];
      // linear interpolation between spectrum bins
      const double pos = nu / (t.nu_thz[1] - t.nu_thz[0]);
      const auto k0 = static_cast<std::size_t>(std::floor(pos));
      double value = 1.0;
      if (k0 + 1 < t.nu_thz.size()) {
        const double f = pos - static_cast<double>(k0);
        value = (1.0 - f) * t.transmission[k0] + f * t.transmission[k0 + 1];
      }
      map.transmission(row, static_cast<int>(k)) = value;
    }
    auto solution = bogoliubov_diagonalize(system);
    std::vector<double> nus;
    nus.reserve(solution.modes.size());
    for (const auto& m : solution.modes) nus.push_back(m.nu_thz);
    map.eigenfrequencies[row] = std::move(nus);
  };

  for (std::size_t start = 0; start < nu_c_grid.size();
       start += static_cast<std::size_t>(threads)) {
    const std::size_t stop =
        std::min(nu_c_grid.size(), start + static_cast<std::size_t>(threads));
    std::vector<std::future<void>> batch;
    for (std::size_t r = start; r < stop; ++r)
      batch.push_back(std::async(std::launch::async, column, static_cast<int>(r)));
    for (auto& f : batch) f.get(); // rethrows: a failed column aborts the sweep
  }
  return map;
}

} // namespace mpp
