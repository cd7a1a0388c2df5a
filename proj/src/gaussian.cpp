#include "mpp/gaussian.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <unsupported/Eigen/MatrixFunctions>

namespace mpp {

namespace {
constexpr double det_tol = 1e-9;
}

double GaussianModeState::purity() const { return 1.0 / (2.0 * std::sqrt(det())); }

void GaussianModeState::validate() const {
  if (!(var_x > 0.0) || !(var_p > 0.0) || !std::isfinite(cov_xp))
    throw UnphysicalCovariance("covariance entries must be positive and finite");
  if (det() < 0.25 - det_tol)
    throw UnphysicalCovariance("covariance violates the uncertainty bound det V >= 1/4");
}

double WignerGrid::x_of(int ix) const {
  return spec.nx == 1 ? spec.x_min
                      : spec.x_min + (spec.x_max - spec.x_min) * ix / (spec.nx - 1);
}
double WignerGrid::p_of(int ip) const {
  return spec.np == 1 ? spec.p_min
                      : spec.p_min + (spec.p_max - spec.p_min) * ip / (spec.np - 1);
}

WignerGrid wigner_grid(const GaussianModeState& state, const WignerGridSpec& spec) {
  state.validate();
  if (spec.nx < 1 || spec.np < 1)
    throw std::invalid_argument("wigner grid resolution must be >= 1");
  const double det = state.det();
  const double norm = 1.0 / (2.0 * std::numbers::pi * std::sqrt(det));
  // inverse covariance
  const double ixx = state.var_p / det;
  const double ipp = state.var_x / det;
  const double ixp = -state.cov_xp / det;

  WignerGrid grid;
  grid.spec = spec;
  grid.values.resize(static_cast<size_t>(spec.nx) * spec.np);
  for (int ix = 0; ix < spec.nx; ++ix) {
    const double x = grid.x_of(ix);
    for (int ip = 0; ip < spec.np; ++ip) {
      const double p = grid.p_of(ip);
      const double quad = ixx * x * x + 2.0 * ixp * x * p + ipp * p * p;
      grid.values[static_cast<size_t>(ix) * spec.np + ip] =
          norm * std::exp(-0.5 * quad);
    }
  }
  return grid;
}

double FockDistribution::total() const {
  double s = 0.0;
  for (double p : probabilities) s += p;
  return s;
}

double FockDistribution::mean() const {
  double s = 0.0;
  for (size_t n = 0; n < probabilities.size(); ++n) s += n * probabilities[n];
  return s;
}

FockDistribution fock_probabilities(const GaussianModeState& state, int n_max) {
  state.validate();
  if (n_max < 2) throw std::invalid_argument("n_max must be >= 2");
  const int dim = n_max + 1;

  // V = R(theta) diag(v1, v2) R(theta)^T with v1 >= v2.
  const double half_tr = 0.5 * (state.var_x + state.var_p);
  const double half_diff = 0.5 * (state.var_x - state.var_p);
  const double rad = std::hypot(half_diff, state.cov_xp);
  const double v1 = half_tr + rad;
  const double v2 = half_tr - rad;
  const double theta = 0.5 * std::atan2(2.0 * state.cov_xp,
                                        state.var_x - state.var_p);
  const double nu_s = std::sqrt(v1 * v2); // symplectic eigenvalue
  const double n_bar = nu_s - 0.5;
  const double r = 0.25 * std::log(v1 / v2);

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  if (n_bar <= 1e-14) {
    rho(0, 0) = 1.0;
  } else {
    const double ratio = n_bar / (1.0 + n_bar);
    double p = 1.0 / (1.0 + n_bar);
    for (int n = 0; n < dim; ++n) {
      rho(n, n) = p;
      p *= ratio;
    }
  }

  if (r > 0.0) {
    // squeeze generator G = (xi* a^2 - xi a^dag^2)/2 with xi = -r e^{2 i theta}
    // (anti-squeezed axis rotated to angle theta)
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    const std::complex<double> xi =
        -r * std::exp(std::complex<double>(0.0, 2.0 * theta));
    const Eigen::MatrixXcd a2 = a * a;
    const Eigen::MatrixXcd gen =
        0.5 * (std::conj(xi) * a2 - xi * a2.adjoint());
    const Eigen::MatrixXcd u = gen.exp();
    rho = u * rho * u.adjoint();
  }

  FockDistribution dist;
  dist.probabilities.resize(dim);
  for (int n = 0; n < dim; ++n)
    dist.probabilities[n] = std::max(0.0, rho(n, n).real());
  return dist;
}

FockDistribution fock_probabilities_auto(const GaussianModeState& state,
                                         double tail_tol) {
  int n_max = 16;
  for (;;) {
    FockDistribution d = fock_probabilities(state, n_max);
    if (1.0 - d.total() < tail_tol || n_max >= 4096) return d;
    n_max *= 2;
  }
}

} // namespace mpp
