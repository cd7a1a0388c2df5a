#include "mpp/hopfield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace mpp {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double reality_tol = 1e-8;       // rad/ps, imaginary-part bound
constexpr double degeneracy_tol_thz = 1e-10;
constexpr double dark_weight_tol = 1e-8;

double symplectic_product_norm(const Eigen::VectorXcd& c, int n) {
  double norm = 0.0;
  for (int i = 0; i < n; ++i) norm += std::norm(c(i));
  for (int i = n; i < 2 * n; ++i) norm -= std::norm(c(i));
  return norm;
}

std::complex<double> symplectic_inner(const Eigen::VectorXcd& a,
                                      const Eigen::VectorXcd& b, int n) {
  std::complex<double> s = 0.0;
  for (int i = 0; i < n; ++i) s += std::conj(a(i)) * b(i);
  for (int i = n; i < 2 * n; ++i) s -= std::conj(a(i)) * b(i);
  return s;
}

void fix_phase(Eigen::VectorXcd& c) {
  int imax = 0;
  double amax = 0.0;
  for (int i = 0; i < c.size(); ++i) {
    if (std::abs(c(i)) > amax) {
      amax = std::abs(c(i));
      imax = i;
    }
  }
  if (amax == 0.0) return;
  c *= std::abs(c(imax)) / c(imax);
}
} // namespace

void ModeSystem::validate() const {
  if (omega_r_thz.rows() != n_cavity() || omega_r_thz.cols() != n_matter())
    throw std::invalid_argument("coupling matrix shape mismatch");
  std::vector<int> js, alphas;
  for (const auto& c : cavity) {
    if (c.nu_thz <= 0.0) throw std::invalid_argument("cavity frequency must be > 0");
    js.push_back(c.j);
  }
  std::sort(js.begin(), js.end());
  if (std::adjacent_find(js.begin(), js.end()) != js.end())
    throw std::invalid_argument("duplicate cavity mode index");
  for (const auto& m : matter) alphas.push_back(m.alpha);
  std::sort(alphas.begin(), alphas.end());
  if (std::adjacent_find(alphas.begin(), alphas.end()) != alphas.end())
    throw std::invalid_argument("duplicate matter mode index");
  for (int j = 0; j < n_cavity(); ++j)
    for (int a = 0; a < n_matter(); ++a) {
      const double w = omega_r_thz(j, a);
      if (!std::isfinite(w) || w < 0.0)
        throw std::invalid_argument("Omega_R entries must be finite and >= 0");
    }
  diamagnetic_rad_ps(); // rejects coupled zero-frequency matter modes
}

std::vector<double> ModeSystem::diamagnetic_rad_ps() const {
  std::vector<double> d(n_cavity(), 0.0);
  for (int j = 0; j < n_cavity(); ++j) {
    for (int a = 0; a < n_matter(); ++a) {
      const double om = two_pi * omega_r_thz(j, a);
      if (om == 0.0) continue;
      const double wm = two_pi * matter[a].nu_thz;
      if (wm <= 0.0) {
        std::ostringstream msg;
        msg << "diamagnetic term singular: matter mode alpha=" << matter[a].alpha
            << " has zero frequency but nonzero coupling";
        throw std::invalid_argument(msg.str());
      }
      d[j] += om * om / wm;
    }
  }
  return d;
}

ModeSystem ModeSystem::single_pair(double nu_cavity_thz, double nu_matter_thz,
                                   double omega_r_thz) {
  ModeSystem s;
  s.cavity = {{1, nu_cavity_thz}};
  s.matter = {{0, nu_matter_thz}};
  s.omega_r_thz = Eigen::MatrixXd::Constant(1, 1, omega_r_thz);
  return s;
}

Eigen::MatrixXd build_dynamical_matrix(const ModeSystem& system) {
  system.validate();
  const int nj = system.n_cavity();
  const int nm = system.n_matter();
  const int n = nj + nm;
  const std::vector<double> dia = system.diamagnetic_rad_ps();

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int j = 0; j < nj; ++j) {
    const double wj = two_pi * system.cavity[j].nu_thz;
    m(j, j) = wj + 2.0 * dia[j];
    m(j, n + j) = 2.0 * dia[j];
    for (int a = 0; a < nm; ++a) {
      const double g = two_pi * system.omega_r_thz(j, a);
      m(j, nj + a) = g;
      m(j, n + nj + a) = g;
      m(nj + a, j) = g;
      m(nj + a, n + j) = g;
    }
  }
  for (int a = 0; a < nm; ++a)
    m(nj + a, nj + a) = two_pi * system.matter[a].nu_thz;
  // creation-operator rows: [v^dag, H] = -conj of the annihilation rows
  m.block(n, 0, n, n) = -m.block(0, n, n, n);
  m.block(n, n, n, n) = -m.block(0, 0, n, n);
  return m;
}

HopfieldSolution bogoliubov_diagonalize(const ModeSystem& system) {
  const Eigen::MatrixXd m = build_dynamical_matrix(system);
  const int n = system.n_modes();

  // Hopfield coefficient rows are eigenvectors of the transposed matrix:
  // requiring [p, H] = omega p for p = c^T (a, b, a^dag, b^dag) gives
  // M^T c = omega c.
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m.transpose());
  if (solver.info() != Eigen::Success)
    throw InstabilityError("eigen decomposition failed to converge");

  struct Candidate {
    double omega;
    Eigen::VectorXcd c;
  };
  std::vector<Candidate> retained;
  for (int i = 0; i < 2 * n; ++i) {
    const std::complex<double> lam = solver.eigenvalues()(i);
    if (std::abs(lam.imag()) > reality_tol) {
      std::ostringstream msg;
      msg << "unstable system: eigenvalue " << lam.real() / two_pi << " + "
          << lam.imag() / two_pi << "i THz has non-real frequency";
      throw InstabilityError(msg.str());
    }
    if (lam.real() <= reality_tol) continue;
    Eigen::VectorXcd c = solver.eigenvectors().col(i);
    if (symplectic_product_norm(c, n) <= 0.0) continue;
    retained.push_back({lam.real(), std::move(c)});
  }
  if (static_cast<int>(retained.size()) != n) {
    std::ostringstream msg;
    msg << "expected " << n << " positive-norm modes, found " << retained.size();
    throw InstabilityError(msg.str());
  }
  std::sort(retained.begin(), retained.end(),
            [](const Candidate& a, const Candidate& b) { return a.omega < b.omega; });

  // Symplectic Gram-Schmidt inside (near-)degenerate groups.
  const double deg_tol = degeneracy_tol_thz * two_pi;
  for (size_t lo = 0; lo < retained.size();) {
    size_t hi = lo + 1;
    while (hi < retained.size() &&
           retained[hi].omega - retained[hi - 1].omega < deg_tol)
      ++hi;
    for (size_t i = lo; i < hi; ++i) {
      for (size_t k = lo; k < i; ++k)
        retained[i].c -= symplectic_inner(retained[k].c, retained[i].c, n) *
                         retained[k].c;
      const double norm = symplectic_product_norm(retained[i].c, n);
      if (norm <= 0.0)
        throw InstabilityError("degenerate subspace lost positive norm");
      retained[i].c /= std::sqrt(norm);
    }
    lo = hi;
  }

  HopfieldSolution sol;
  sol.n_cavity = system.n_cavity();
  sol.n_matter = system.n_matter();
  for (auto& cand : retained) {
    const double norm = symplectic_product_norm(cand.c, n);
    cand.c /= std::sqrt(norm);
    fix_phase(cand.c);
    sol.modes.push_back({cand.omega / two_pi, std::move(cand.c)});
  }
  return sol;
}

std::complex<double> HopfieldSolution::w(int beta, int j_idx) const {
  return modes[beta].coeff(j_idx);
}
std::complex<double> HopfieldSolution::x(int beta, int m_idx) const {
  return modes[beta].coeff(n_cavity + m_idx);
}
std::complex<double> HopfieldSolution::y(int beta, int j_idx) const {
  return modes[beta].coeff(n_cavity + n_matter + j_idx);
}
std::complex<double> HopfieldSolution::z(int beta, int m_idx) const {
  return modes[beta].coeff(2 * n_cavity + n_matter + m_idx);
}

double HopfieldSolution::photonic_weight(int beta) const {
  double s = 0.0;
  for (int j = 0; j < n_cavity; ++j)
    s += std::norm(w(beta, j)) + std::norm(y(beta, j));
  return s;
}

double HopfieldSolution::symplectic_norm(int beta) const {
  return symplectic_product_norm(modes[beta].coeff, n_cavity + n_matter);
}

int Classification::count(PolaritonType t) const {
  return static_cast<int>(
      std::count_if(labels.begin(), labels.end(),
                    [&](const PolaritonLabel& l) { return l.type == t; }));
}

int Classification::count(PolaritonType t, int cavity_j) const {
  return static_cast<int>(std::count_if(
      labels.begin(), labels.end(), [&](const PolaritonLabel& l) {
        return l.type == t && l.cavity_j == cavity_j;
      }));
}

Classification classify_polaritons(const HopfieldSolution& solution,
                                   const ModeSystem& system) {
  const int nmodes = static_cast<int>(solution.modes.size());
  Classification cls;
  cls.labels.resize(nmodes);

  std::vector<int> bright;
  int dark_rank = -1;
  for (int b = 0; b < nmodes; ++b) {
    if (solution.photonic_weight(b) < dark_weight_tol) {
      cls.labels[b] = {PolaritonType::Dark, 0, dark_rank--};
    } else {
      bright.push_back(b);
    }
  }
  // attribute each bright mode to the cavity mode with the largest weight
  std::vector<std::vector<int>> per_j(system.n_cavity());
  for (int b : bright) {
    int best = 0;
    double wmax = -1.0;
    for (int j = 0; j < system.n_cavity(); ++j) {
      const double wj = std::norm(solution.w(b, j)) + std::norm(solution.y(b, j));
      if (wj > wmax) {
        wmax = wj;
        best = j;
      }
    }
    per_j[best].push_back(b);
  }
  for (int j = 0; j < system.n_cavity(); ++j) {
    // modes arrive frequency-sorted; lowest attributed mode is the LP
    for (size_t r = 0; r < per_j[j].size(); ++r) {
      const int b = per_j[j][r];
      cls.labels[b] = {r == 0 ? PolaritonType::Lower : PolaritonType::Upper,
                       system.cavity[j].j, static_cast<int>(r)};
    }
  }
  return cls;
}

QuadratureCovariance quadrature_covariance(const HopfieldSolution& solution,
                                           int j_idx) {
  // a_j = sum_beta (w*_{beta,j} p_beta - y_{beta,j} p^dag_beta) in the
  // polariton vacuum gives <a a> = -sum w* y, <a^dag a> = sum |y|^2.
  double n = 0.0;
  std::complex<double> s = 0.0;
  for (size_t b = 0; b < solution.modes.size(); ++b) {
    n += std::norm(solution.y(static_cast<int>(b), j_idx));
    s += std::conj(solution.w(static_cast<int>(b), j_idx)) *
         solution.y(static_cast<int>(b), j_idx);
  }
  QuadratureCovariance cov;
  cov.var_x = n + 0.5 - s.real();
  cov.var_p = n + 0.5 + s.real();
  cov.cov_xp = -s.imag();
  return cov;
}

GroundStateReport ground_state_report(const HopfieldSolution& solution,
                                      const ModeSystem& system) {
  GroundStateReport rep;
  rep.n_cavity.assign(system.n_cavity(), 0.0);
  rep.m_matter.assign(system.n_matter(), 0.0);
  for (size_t b = 0; b < solution.modes.size(); ++b) {
    for (int j = 0; j < system.n_cavity(); ++j)
      rep.n_cavity[j] += std::norm(solution.y(static_cast<int>(b), j));
    for (int a = 0; a < system.n_matter(); ++a)
      rep.m_matter[a] += std::norm(solution.z(static_cast<int>(b), a));
  }
  rep.n_total = std::accumulate(rep.n_cavity.begin(), rep.n_cavity.end(), 0.0);
  for (int j = 0; j < system.n_cavity(); ++j) {
    rep.eta.push_back(equivalent_eta(rep.n_cavity[j]));
    rep.covariance.push_back(quadrature_covariance(solution, j));
  }
  return rep;
}

double single_mode_photon_number(double eta) {
  if (eta < 0.0) throw std::invalid_argument("eta must be >= 0");
  if (eta == 0.0) return 0.0;
  const double nu = 1.0;
  const ModeSystem s = ModeSystem::single_pair(nu, nu, eta * nu);
  const auto sol = bogoliubov_diagonalize(s);
  double n = 0.0;
  for (size_t b = 0; b < sol.modes.size(); ++b)
    n += std::norm(sol.y(static_cast<int>(b), 0));
  return n;
}

double single_mode_photon_number_detuned(double eta, double matter_over_cavity,
                                         CouplingScaling scaling) {
  if (eta < 0.0) throw std::invalid_argument("eta must be >= 0");
  if (matter_over_cavity <= 0.0)
    throw std::invalid_argument("matter/cavity frequency ratio must be > 0");
  const double nu_c = 1.0;
  const double nu_m = matter_over_cavity * nu_c;
  const double omega_r = scaling == CouplingScaling::FixedOmega
                             ? eta * nu_c
                             : eta * std::sqrt(nu_c * nu_m);
  const ModeSystem s = ModeSystem::single_pair(nu_c, nu_m, omega_r);
  const auto sol = bogoliubov_diagonalize(s);
  double n = 0.0;
  for (size_t b = 0; b < sol.modes.size(); ++b)
    n += std::norm(sol.y(static_cast<int>(b), 0));
  return n;
}

double equivalent_eta(double n_photons) {
  if (n_photons < 0.0) throw std::invalid_argument("N must be >= 0");
  if (n_photons == 0.0) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (single_mode_photon_number(hi) < n_photons) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw std::runtime_error("equivalent_eta bracket overflow");
  }
  auto f = [&](double eta) { return single_mode_photon_number(eta) - n_photons; };
  for (int it = 0; it < 200 && (hi - lo) > 1e-9 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  // secant refinement inside the bracket
  double a = lo, b = hi, fa = f(a), fb = f(b);
  for (int it = 0; it < 50; ++it) {
    if (fb == fa) break;
    const double c = b - fb * (b - a) / (fb - fa);
    if (c <= lo || c >= hi) break;
    a = b;
    fa = fb;
    b = c;
    fb = f(b);
    if (std::abs(b - a) < 1e-7 * std::max(1.0, std::abs(b))) break;
  }
  return b;
}

} // namespace mpp
