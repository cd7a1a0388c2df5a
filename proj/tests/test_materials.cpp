#include <doctest.h>

#include <cmath>
#include <complex>

#include "mpp/materials.hpp"

using namespace mpp;

namespace {
MaterialStack default_stack() {
  MaterialStack s;
  s.stack_thickness_um = 0.02;
  s.qw_depths_um = {0.03};
  return s;
}
} // namespace

TEST_CASE("ungated screening limits") {
  auto s = default_stack();
  CHECK(eps_ungated(1e-12, s) == doctest::Approx(6.95).epsilon(1e-6));
  CHECK(eps_ungated(1e4, s) == doctest::Approx(12.9).epsilon(1e-9));
  // monotone between the limits
  double prev = eps_ungated(0.0, s);
  for (double q = 0.5; q < 200.0; q *= 2.0) {
    const double v = eps_ungated(q, s);
    CHECK(v > prev);
    CHECK(v < 12.9 + 1e-12);
    prev = v;
  }
}

TEST_CASE("gated screening") {
  auto s = default_stack();
  s.eps_sub = 12.0;
  s.eps_barrier = 10.0;
  s.cap_thickness_um = 1.0;
  CHECK(eps_gated(std::log(3.0) / 2.0, s) == doctest::Approx(16.0).epsilon(1e-12));
  CHECK_THROWS_AS(eps_gated(0.0, s), GatedScreeningDivergence);
  // diverges as ~ eps_barrier / (2 q d)
  const double q = 1e-6;
  CHECK(eps_gated(q, s) == doctest::Approx(10.0 / (2.0 * q)).epsilon(1e-4));
}

TEST_CASE("gated and ungated meet at large q") {
  auto s = default_stack();
  const double q = 25.0 / s.cap_thickness_um; // qd = 25
  CHECK(std::abs(eps_gated(q, s) - eps_ungated(q, s)) /
            eps_ungated(q, s) <
        1e-6);
}

TEST_CASE("effective dielectric mixing") {
  auto s = default_stack();
  s.stack_thickness_um = 0.0;
  s.metal_coverage = 0.0;
  const double q = 0.7;
  CHECK(eps_effective(q, s) == doctest::Approx(eps_ungated(q, s)));
  s.metal_coverage = 1.0;
  CHECK(eps_effective(q, s) == doctest::Approx(eps_gated(q, s)));
}

TEST_CASE("stack thickness adds eps_sub*q*t/2") {
  auto s = default_stack();
  s.metal_coverage = 0.0;
  const double q = 2.0 * std::acos(-1.0) / 30.0;
  auto thin = s;
  thin.stack_thickness_um = 0.0;
  auto thick = s;
  thick.stack_thickness_um = 1.0;
  const double term = eps_effective(q, thick) - eps_effective(q, thin);
  CHECK(term == doctest::Approx(12.9 * q / 2.0).epsilon(1e-12));
  CHECK(term == doctest::Approx(1.351).epsilon(1e-3));
}

TEST_CASE("effective dielectric monotone in coverage") {
  auto s = default_stack();
  double prev = -1.0;
  for (double delta = 0.0; delta <= 1.0; delta += 0.125) {
    s.metal_coverage = delta;
    const double v = eps_effective(0.4, s);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("GaAs phonon permittivity") {
  PhononModel m;
  const auto stat = eps_gaas(0.0, m);
  CHECK(stat.real() == doctest::Approx(12.87).epsilon(0.01));
  CHECK(eps_gaas(1e6, m).real() == doctest::Approx(10.87).epsilon(1e-4));

  // reality condition eps(-nu) = conj(eps(nu))
  for (double nu = 0.5; nu < 20.0; nu += 0.5)
    CHECK(std::abs(eps_gaas(-nu, m) - std::conj(eps_gaas(nu, m))) < 1e-12);

  // Lorentz pole: loss (|Im eps|, negative in the +i gamma omega convention)
  // maximal near nu_TO
  const double peak = std::abs(eps_gaas(m.nu_to_thz, m).imag());
  CHECK(eps_gaas(m.nu_to_thz, m).imag() < 0.0);
  CHECK(peak > std::abs(eps_gaas(m.nu_to_thz - 0.2, m).imag()));
  CHECK(peak > std::abs(eps_gaas(m.nu_to_thz + 0.2, m).imag()));
}

TEST_CASE("stack validation reports every violation") {
  MaterialStack s;
  s.metal_coverage = 1.7;
  s.cap_thickness_um = -1.0;
  s.qw_depths_um = {0.03, 0.05}; // n_qw = 1 mismatch
  try {
    s.validate();
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("metal_coverage out of [0,1]") != std::string::npos);
    CHECK(msg.find("cap") != std::string::npos);
  }
}
