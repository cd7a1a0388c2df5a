#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mpp/gaussian.hpp"

using namespace mpp;

namespace {

GaussianModeState ground_state(double eta) {
  const auto sol = bogoliubov_diagonalize(ModeSystem::single_pair(1.0, 1.0, eta));
  return GaussianModeState::from_covariance(quadrature_covariance(sol, 0));
}

} // namespace

TEST_CASE("vacuum Wigner function") {
  WignerGridSpec spec;
  spec.x_min = spec.p_min = -5.0;
  spec.x_max = spec.p_max = 5.0;
  spec.nx = spec.np = 201;
  const auto grid = wigner_grid(GaussianModeState::vacuum(), spec);
  CHECK(grid.at(100, 100) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-12));
  // isotropy
  CHECK(grid.at(130, 100) == doctest::Approx(grid.at(100, 130)).epsilon(1e-12));

  double integral = 0.0;
  const double dx = (spec.x_max - spec.x_min) / (spec.nx - 1);
  const double dp = (spec.p_max - spec.p_min) / (spec.np - 1);
  for (int ix = 0; ix < spec.nx; ++ix)
    for (int ip = 0; ip < spec.np; ++ip) integral += grid.at(ix, ip) * dx * dp;
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("deep-strong ground state is a squeezed ellipse") {
  const auto state = ground_state(3.0);
  CHECK(std::max(state.var_x, state.var_p) / std::min(state.var_x, state.var_p) >
        1.0);
  CHECK(std::min(state.var_x, state.var_p) < 0.5);

  WignerGridSpec spec;
  spec.x_min = spec.p_min = -6.0;
  spec.x_max = spec.p_max = 6.0;
  spec.nx = spec.np = 241;
  const auto grid = wigner_grid(state, spec);
  double vmin = 1.0, integral = 0.0;
  const double dx = (spec.x_max - spec.x_min) / (spec.nx - 1);
  const double dp = (spec.p_max - spec.p_min) / (spec.np - 1);
  for (double v : grid.values) {
    vmin = std::min(vmin, v);
    integral += v * dx * dp;
  }
  CHECK(vmin >= -1e-12); // Gaussian states are Wigner-positive
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("unphysical covariance is rejected") {
  GaussianModeState bad{0.3, 0.3, 0.0};
  CHECK_THROWS_AS(wigner_grid(bad, WignerGridSpec{}), UnphysicalCovariance);
  CHECK_THROWS_AS(fock_probabilities(bad, 16), UnphysicalCovariance);
}

TEST_CASE("Fock distribution of the vacuum") {
  const auto d = fock_probabilities(GaussianModeState::vacuum(), 12);
  CHECK(d.probabilities[0] == doctest::Approx(1.0).epsilon(1e-10));
  for (int n = 1; n <= d.cutoff(); ++n)
    CHECK(std::abs(d.probabilities[n]) < 1e-10);
}

TEST_CASE("pure squeezed state has even parity") {
  // pure squeezed vacuum: det V = 1/4, var ratio e^{+-2r}
  const double r = 0.8;
  GaussianModeState state{0.5 * std::exp(2.0 * r), 0.5 * std::exp(-2.0 * r), 0.0};
  CHECK(state.purity() == doctest::Approx(1.0).epsilon(1e-9));
  const auto d = fock_probabilities_auto(state);
  for (int n = 1; n <= d.cutoff(); n += 2) CHECK(d.probabilities[n] < 1e-10);
  CHECK(d.total() > 1.0 - 1e-6);
  // the auto cutoff stops at 1e-6 tail mass, which bounds the mean error only
  // to roughly cutoff * 1e-6
  CHECK(d.mean() ==
        doctest::Approx(state.mean_photon_number()).epsilon(2e-3));
}

TEST_CASE("two-photon weight beats one-photon in the deep-strong regime") {
  const auto d3 = fock_probabilities_auto(ground_state(3.0));
  CHECK(d3.probabilities[2] > d3.probabilities[1]);
  CHECK(d3.total() > 1.0 - 1e-6);
  CHECK(d3.mean() == doctest::Approx(ground_state(3.0).mean_photon_number())
                         .epsilon(5e-3));
  // at eta = 1 the reduced photonic state is mixed enough that p1 still
  // exceeds p2; values cross-checked against exact sparse diagonalization
  const auto d1 = fock_probabilities_auto(ground_state(1.0));
  CHECK(d1.probabilities[1] == doctest::Approx(0.08130).epsilon(0.02));
  CHECK(d1.probabilities[2] == doctest::Approx(0.03815).epsilon(0.02));
  CHECK(d1.probabilities[1] > d1.probabilities[2]);
}

TEST_CASE("mean of the distribution matches the covariance") {
  for (double eta : {0.3, 0.9, 1.8}) {
    const auto state = ground_state(eta);
    const int n_max =
        std::max(32, static_cast<int>(8.0 * state.mean_photon_number()) + 20);
    const auto d = fock_probabilities(state, n_max);
    CHECK(std::abs(d.mean() - state.mean_photon_number()) < 1e-4);
    double total = d.total();
    CHECK(total <= 1.0 + 1e-9);
    CHECK(total > 1.0 - 1e-4);
  }
}

TEST_CASE("purity bounds") {
  CHECK(GaussianModeState::vacuum().purity() == doctest::Approx(1.0));
  for (double eta : {0.5, 1.5, 3.0}) {
    const double mu = ground_state(eta).purity();
    CHECK(mu > 0.0);
    CHECK(mu <= 1.0 + 1e-12);
  }
}
