#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mpp/dynamics.hpp"

using namespace mpp;

namespace {

CavityOscillatorTable single_row(double nu, double gamma) {
  CavityOscillatorTable t;
  t.rows = {{nu, gamma, 1.0, 0.0}};
  return t;
}

std::vector<double> grid(double t_end, double dt) {
  std::vector<double> t;
  const int n = static_cast<int>(std::llround(t_end / dt));
  for (int i = 0; i <= n; ++i) t.push_back(i * dt);
  return t;
}

double peak_nu(const Spectrum& s) {
  int best = 0;
  for (std::size_t i = 1; i < s.amplitude.size(); ++i)
    if (s.amplitude[i] > s.amplitude[best]) best = static_cast<int>(i);
  return s.nu_thz[best];
}

} // namespace

TEST_CASE("drive pulse shape") {
  DrivePulse pulse{5.0, 0.15, 1.0};
  const double dt = 0.002;
  const auto t = grid(40.0, dt);
  const auto e = synthesize_pulse(pulse, t);
  CHECK(std::abs(e[2500]) < 1e-12); // E(t0) = 0
  // odd symmetry about t0
  CHECK(e[2500 + 40] == doctest::Approx(-e[2500 - 40]).epsilon(1e-10));
  double integral = 0.0, linf = 0.0;
  for (double v : e) {
    integral += v * dt;
    linf = std::max(linf, std::abs(v));
  }
  CHECK(std::abs(integral) < 1e-8 * linf);
  // amplitude spectrum peaks at 1/(2 pi sigma)
  const auto s = amplitude_spectrum(e, dt);
  CHECK(peak_nu(s) ==
        doctest::Approx(1.0 / (2.0 * std::numbers::pi * pulse.sigma_ps))
            .epsilon(0.02));

  CHECK_THROWS_AS(synthesize_pulse(pulse, grid(5.5, dt)), std::invalid_argument);
}

TEST_CASE("zero drive leaves every field at zero") {
  const auto system = ModeSystem::single_pair(0.52, 0.6, 0.1);
  IntegrationParams p{0.002, 20.0, 0.05, {}};
  const auto trace =
      integrate_eom(system, single_row(0.52, 0.05), p, {5.0, 0.15, 0.0});
  CHECK(trace.cavity.cwiseAbs().maxCoeff() == 0.0);
  CHECK(trace.matter.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("uncoupled mode rings at its own frequency and decays") {
  ModeSystem bare; // empty matter sector: the table row integrates alone
  IntegrationParams p{0.002, 120.0, 0.05, {}};
  const double nu = 0.8, gamma = 0.06;
  const auto trace = integrate_eom(bare, single_row(nu, gamma), p, {5.0, 0.15, 1.0});
  std::vector<double> re(trace.time_ps.size());
  for (std::size_t i = 0; i < re.size(); ++i)
    re[i] = trace.cavity(0, static_cast<int>(i)).real();
  const auto s = amplitude_spectrum(re, p.dt_ps);
  CHECK(std::abs(peak_nu(s) - nu) <= s.bin_thz);

  // amplitude envelope exp(-gamma t) after the pulse
  const int i1 = 10000, i2 = 40000; // t = 20 ps, 80 ps
  const double a1 = std::abs(trace.cavity(0, i1));
  const double a2 = std::abs(trace.cavity(0, i2));
  CHECK(std::log(a1 / a2) ==
        doctest::Approx(gamma * (trace.time_ps[i2] - trace.time_ps[i1]))
            .epsilon(0.01));
}

TEST_CASE("step-size precondition is enforced") {
  const auto system = ModeSystem::single_pair(5.0, 5.5, 0.2);
  IntegrationParams p{0.01, 20.0, 0.05, {}}; // 1/(50*5.5) = 0.0036
  try {
    integrate_eom(system, single_row(5.0, 0.05), p, {5.0, 0.15, 1.0});
    FAIL("expected refusal");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("refusing") != std::string::npos);
  }
}

TEST_CASE("reference oscillator table") {
  const auto t = CavityOscillatorTable::reference();
  REQUIRE(t.rows.size() == 5);
  CHECK(t.rows[0].nu_thz == 0.52);
  CHECK(t.rows[0].gamma_thz == 0.08);
  CHECK(t.rows[0].amplitude == 2.8);
  CHECK(t.rows[1].nu_thz == 1.95);
  CHECK(t.rows[1].amplitude == 44.5);
  CHECK(t.rows[4].nu_thz == 6.0);
  CHECK(t.rows[1].phase_rad == doctest::Approx(-0.14 * std::numbers::pi));
  t.validate();
}

TEST_CASE("transmission identities") {
  ModeSystem bare;
  auto table = CavityOscillatorTable::reference();
  IntegrationParams p{0.002, 120.0, 0.05, {}};
  DrivePulse pulse{5.0, 0.15, 1.0};

  // all amplitudes zero -> nothing radiates -> T = 1
  auto silent = table;
  for (auto& r : silent.rows) r.amplitude = 0.0;
  const auto t0 = transmission_spectrum(integrate_eom(bare, silent, p, pulse), 0.1);
  for (std::size_t k = 0; k < t0.nu_thz.size(); ++k)
    if (t0.valid[k]) CHECK(t0.transmission[k] == doctest::Approx(1.0));

  // bare resonator: calibrated dip at the fundamental
  const double kappa = calibrate_kappa_rad(table, p, pulse, 0.9);
  const auto t1 = transmission_spectrum(integrate_eom(bare, table, p, pulse), kappa);
  double tmin = 1.0;
  double nu_at_min = 0.0;
  for (std::size_t k = 0; k < t1.nu_thz.size(); ++k)
    if (t1.valid[k] && t1.nu_thz[k] > 0.3 && t1.nu_thz[k] < 0.9 &&
        t1.transmission[k] < tmin) {
      tmin = t1.transmission[k];
      nu_at_min = t1.nu_thz[k];
    }
  CHECK(tmin == doctest::Approx(0.1).epsilon(0.05));
  CHECK(nu_at_min == doctest::Approx(0.52).epsilon(0.15));
}

TEST_CASE("undamped post-pulse energy is conserved") {
  const auto system = ModeSystem::single_pair(0.52, 0.6, 0.15);
  CavityOscillatorTable table = single_row(0.52, 0.0);
  IntegrationParams p{0.002, 110.0, 0.0, {0.0}};
  const auto trace = integrate_eom(system, table, p, {5.0, 0.15, 1.0});
  const auto e = energy_channels(trace, system);
  // take t > t0 + 6 sigma, compare over the last 100 ps
  const std::size_t start = 5000; // 10 ps
  double emin = 1e300, emax = -1e300;
  for (std::size_t i = start; i < e.total.size(); ++i) {
    emin = std::min(emin, e.total[i]);
    emax = std::max(emax, e.total[i]);
  }
  CHECK((emax - emin) / emax < 1e-6);

  // energy exchanges periodically between the two channels
  double cav_min = 1e300, cav_max = -1e300;
  for (std::size_t i = start; i < e.total.size(); ++i) {
    cav_min = std::min(cav_min, e.cavity(0, static_cast<int>(i)));
    cav_max = std::max(cav_max, e.cavity(0, static_cast<int>(i)));
  }
  CHECK(cav_max > 2.0 * cav_min);
}

TEST_CASE("RK4 order: halving dt cuts the error ~16x") {
  const auto system = ModeSystem::single_pair(0.52, 0.6, 0.15);
  CavityOscillatorTable table = single_row(0.52, 0.02);
  DrivePulse pulse{5.0, 0.15, 1.0};
  auto final_state = [&](double dt) {
    IntegrationParams p{dt, 40.0, 0.03, {}};
    const auto tr = integrate_eom(system, table, p, pulse);
    return tr.cavity(0, static_cast<int>(tr.time_ps.size()) - 1);
  };
  const auto f1 = final_state(0.004);
  const auto f2 = final_state(0.002);
  const auto f4 = final_state(0.001);
  const double e1 = std::abs(f1 - f4);
  const double e2 = std::abs(f2 - f4);
  // (h^4 - (h/4)^4)/((h/2)^4 - (h/4)^4) = 16 * 255/240 = 17
  const double ratio = e1 / e2;
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("switch-off removes couplings and drive") {
  const auto system = ModeSystem::single_pair(0.52, 0.6, 0.15);
  CavityOscillatorTable table = single_row(0.52, 0.05);
  IntegrationParams p{0.002, 60.0, 0.05, {}};
  DrivePulse pulse{5.0, 0.15, 1.0};
  const auto full = integrate_eom(system, table, p, pulse);
  const auto same = switch_off(system, table, p, pulse, {1});
  CHECK((full.cavity - same.cavity).cwiseAbs().maxCoeff() == 0.0);
  const auto off = switch_off(system, table, p, pulse, {});
  CHECK(off.cavity.cwiseAbs().maxCoeff() == 0.0);
  CHECK(off.matter.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matter polarization spectra share one frequency comb") {
  ModeSystem system;
  system.cavity = {{1, 0.8}};
  system.matter = {{0, 0.5}, {1, 0.9}, {2, 1.4}};
  system.omega_r_thz = Eigen::MatrixXd::Zero(1, 3);
  system.omega_r_thz << 0.2, 0.25, 0.15;
  // enough damping that the trace decays to ~1e-4 by t_end: an undecayed
  // tail would add truncation sidelobes next to every true line
  CavityOscillatorTable table = single_row(0.8, 0.03);
  IntegrationParams p{0.002, 300.0, 0.03, {}};
  const auto trace = integrate_eom(system, table, p, {5.0, 0.15, 1.0});

  // every matter mode rings on the same comb: the polariton eigenfrequencies
  const auto sol = bogoliubov_diagonalize(system);
  auto peaks_of = [&](int m, double threshold) {
    std::vector<double> re(trace.time_ps.size());
    for (std::size_t i = 0; i < re.size(); ++i)
      re[i] = trace.matter(m, static_cast<int>(i)).real();
    const auto s = amplitude_spectrum(re, p.dt_ps);
    std::vector<double> nus;
    for (int k : spectral_peaks(s, threshold)) nus.push_back(s.nu_thz[k]);
    return nus;
  };
  const double bin = 1.0 / (std::pow(2.0, std::ceil(std::log2(4.0 * 150001))) *
                            p.dt_ps);
  int matched_lines = 0;
  for (int m = 0; m < 3; ++m) {
    // 12%: low enough to catch every real line here, high enough to reject
    // the bumps where overlapping Lorentzian tails interfere
    const auto strong = peaks_of(m, 0.12);
    REQUIRE(!strong.empty());
    for (double nu : strong) {
      double best = 1e300;
      for (const auto& mode : sol.modes)
        best = std::min(best, std::abs(nu - mode.nu_thz));
      // damping shifts each line by O(gamma^2 / omega), within a bin or two
      CHECK(best <= 2.0 * bin + 1e-12);
      ++matched_lines;
    }
  }
  CHECK(matched_lines >= 6); // the comb is shared, not one line per mode
}

TEST_CASE("spectrum padding and bins") {
  std::vector<double> samples(1000, 0.0);
  samples[10] = 1.0;
  const auto s = amplitude_spectrum(samples, 0.01);
  // next power of two >= 4000 is 4096
  CHECK(s.bin_thz == doctest::Approx(1.0 / (4096 * 0.01)));
  CHECK(s.nu_thz.size() == 2049);
}
