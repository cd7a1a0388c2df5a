#include "mpp/fock_oracle.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace mpp {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

// Multi-index helpers over the product Fock basis (last mode fastest).
struct Indexer {
  std::vector<int> dims;
  std::vector<long> strides;

  explicit Indexer(const std::vector<int>& d) : dims(d), strides(d.size()) {
    long s = 1;
    for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) {
      strides[i] = s;
      s *= d[i];
    }
  }
  long total() const {
    long t = 1;
    for (int d : dims) t *= d;
    return t;
  }
};

// y += c * (a_i + a_i^dag) x
void apply_x_quadrature(const Indexer& idx, int mode, double c,
                        const Eigen::VectorXd& x, Eigen::VectorXd& y) {
  const long stride = idx.strides[mode];
  const int dim = idx.dims[mode];
  const long total = idx.total();
  const long block = stride * dim;
  for (long base = 0; base < total; base += block) {
    for (long off = 0; off < stride; ++off) {
      for (int n = 0; n < dim; ++n) {
        const long k = base + off + n * stride;
        // a: |n> -> sqrt(n) |n-1>, a^dag: |n> -> sqrt(n+1) |n+1>
        if (n > 0) y(k - stride) += c * std::sqrt(double(n)) * x(k);
        if (n + 1 < dim) y(k + stride) += c * std::sqrt(double(n + 1)) * x(k);
      }
    }
  }
}
} // namespace

long TruncatedSystem::dimension() const {
  long t = 1;
  for (int n : n_max) t *= (n + 1);
  return t;
}

void TruncatedSystem::validate() const {
  const int n = n_modes();
  if (n < 1 || n > 3)
    throw std::invalid_argument("oracle supports 1 to 3 modes");
  if (static_cast<int>(diamagnetic.size()) != n ||
      static_cast<int>(n_max.size()) != n ||
      coupling.rows() != n || coupling.cols() != n)
    throw std::invalid_argument("TruncatedSystem shape mismatch");
  for (int i = 0; i < n; ++i) {
    if (omega[i] < 0.0) throw std::invalid_argument("frequencies must be >= 0");
    if (n_max[i] < 1) throw std::invalid_argument("cutoffs must be >= 1");
    for (int k = 0; k < n; ++k)
      if (std::abs(coupling(i, k) - coupling(k, i)) > 0.0)
        throw std::invalid_argument("coupling matrix must be symmetric");
  }
  if (dimension() > 1000000)
    throw std::invalid_argument("truncated Hilbert dimension exceeds 10^6");
}

TruncatedSystem TruncatedSystem::from_mode_system(const ModeSystem& system,
                                                  int n_max) {
  TruncatedSystem t;
  const int nj = system.n_cavity();
  const int nm = system.n_matter();
  const int n = nj + nm;
  t.omega.resize(n);
  t.coupling = Eigen::MatrixXd::Zero(n, n);
  t.diamagnetic.assign(n, 0.0);
  t.n_max.assign(n, n_max);
  for (int j = 0; j < nj; ++j) t.omega[j] = two_pi * system.cavity[j].nu_thz;
  for (int a = 0; a < nm; ++a) t.omega[nj + a] = two_pi * system.matter[a].nu_thz;
  for (int j = 0; j < nj; ++j)
    for (int a = 0; a < nm; ++a) {
      const double g = two_pi * system.omega_r_thz(j, a);
      t.coupling(j, nj + a) = g;
      t.coupling(nj + a, j) = g;
    }
  const auto dia = system.diamagnetic_rad_ps();
  for (int j = 0; j < nj; ++j) t.diamagnetic[j] = dia[j];
  t.validate();
  return t;
}

Eigen::SparseMatrix<double> assemble_hamiltonian(const TruncatedSystem& system) {
  system.validate();
  std::vector<int> dims;
  for (int n : system.n_max) dims.push_back(n + 1);
  const Indexer idx(dims);
  const long dim = idx.total();
  const int nm = system.n_modes();

  std::vector<Eigen::Triplet<double>> trip;
  // diagonal: sum w_i n_i
  std::vector<int> state(nm, 0);
  for (long k = 0; k < dim; ++k) {
    long rem = k;
    double e = 0.0;
    for (int i = 0; i < nm; ++i) {
      state[i] = static_cast<int>(rem / idx.strides[i]);
      rem %= idx.strides[i];
      e += system.omega[i] * state[i];
    }
    trip.emplace_back(k, k, e);
  }

  // build quadrature operators as sparse matrices, then products; assembled
  // symmetrically so H is Hermitian by construction
  auto x_op = [&](int mode) {
    Eigen::SparseMatrix<double> x(dim, dim);
    std::vector<Eigen::Triplet<double>> t;
    const long stride = idx.strides[mode];
    const int d = idx.dims[mode];
    const long block = stride * d;
    for (long base = 0; base < dim; base += block)
      for (long off = 0; off < stride; ++off)
        for (int n = 0; n + 1 < d; ++n) {
          const long k = base + off + n * stride;
          const double v = std::sqrt(double(n + 1));
          t.emplace_back(k + stride, k, v);
          t.emplace_back(k, k + stride, v);
        }
    x.setFromTriplets(t.begin(), t.end());
    return x;
  };

  Eigen::SparseMatrix<double> h(dim, dim);
  h.setFromTriplets(trip.begin(), trip.end());
  std::vector<Eigen::SparseMatrix<double>> xs;
  for (int i = 0; i < nm; ++i) xs.push_back(x_op(i));
  for (int i = 0; i < nm; ++i) {
    for (int k = i + 1; k < nm; ++k) {
      const double g = system.coupling(i, k);
      if (g != 0.0) h += g * Eigen::SparseMatrix<double>(xs[i] * xs[k]);
    }
    if (system.diamagnetic[i] != 0.0)
      h += system.diamagnetic[i] * Eigen::SparseMatrix<double>(xs[i] * xs[i]);
  }
  return h;
}

OracleGroundState oracle_ground_state(const TruncatedSystem& system,
                                      int max_iterations, double residual_tol) {
  const Eigen::SparseMatrix<double> h = assemble_hamiltonian(system);
  const long dim = h.rows();

  // Lanczos with full reorthogonalization, seeded at the bare vacuum (always
  // overlaps the ground state of this Hamiltonian class).
  std::vector<Eigen::VectorXd> basis;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  v(0) = 1.0;
  std::vector<double> alpha, beta;
  double prev_e = std::numeric_limits<double>::max();
  Eigen::VectorXd ritz;
  double energy = 0.0;

  for (int it = 0; it < max_iterations; ++it) {
    basis.push_back(v);
    Eigen::VectorXd w = h * v;
    const double a = v.dot(w);
    alpha.push_back(a);
    w -= a * v;
    if (it > 0) w -= beta.back() * basis[it - 1];
    for (const auto& b : basis) w -= b.dot(w) * b; // full reorthogonalization
    const double bnorm = w.norm();

    // Ritz values of the tridiagonal projection
    const int k = static_cast<int>(alpha.size());
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      tri(i, i) = alpha[i];
      if (i > 0) tri(i, i - 1) = tri(i - 1, i) = beta[i - 1];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    energy = es.eigenvalues()(0);
    const Eigen::VectorXd s = es.eigenvectors().col(0);
    const double residual = bnorm * std::abs(s(k - 1));

    if ((residual < residual_tol && std::abs(prev_e - energy) < 1e-12) ||
        bnorm < 1e-14 || k == dim) {
      ritz = Eigen::VectorXd::Zero(dim);
      for (int i = 0; i < k; ++i) ritz += s(i) * basis[i];
      ritz.normalize();
      OracleGroundState gs;
      gs.energy = energy;
      gs.amplitudes = std::move(ritz);
      for (int n : system.n_max) gs.dims.push_back(n + 1);
      return gs;
    }
    prev_e = energy;
    beta.push_back(bnorm);
    v = w / bnorm;
  }
  std::ostringstream msg;
  msg << "Lanczos did not converge within " << max_iterations
      << " iterations (last energy " << energy << ")";
  throw std::runtime_error(msg.str());
}

OracleObservables oracle_observables(const TruncatedSystem& system,
                                     const OracleGroundState& state) {
  const Indexer idx(state.dims);
  const long dim = idx.total();
  if (state.amplitudes.size() != dim)
    throw std::invalid_argument("state dimension mismatch");
  const int nm = system.n_modes();

  OracleObservables obs;
  obs.mean_n.assign(nm, 0.0);
  obs.fock_marginal.resize(nm);
  for (int i = 0; i < nm; ++i) obs.fock_marginal[i].assign(idx.dims[i], 0.0);

  for (long k = 0; k < dim; ++k) {
    const double p = state.amplitudes(k) * state.amplitudes(k);
    long rem = k;
    for (int i = 0; i < nm; ++i) {
      const int n = static_cast<int>(rem / idx.strides[i]);
      rem %= idx.strides[i];
      obs.mean_n[i] += p * n;
      obs.fock_marginal[i][n] += p;
    }
  }

  for (int i = 0; i < nm; ++i) {
    // X = (a + a^dag)/sqrt(2), P = (a - a^dag)/(i sqrt(2)); the ground
    // state is real, so <XP + PX> reduces to projections of (a +- a^dag).
    Eigen::VectorXd xv = Eigen::VectorXd::Zero(dim);
    apply_x_quadrature(idx, i, 1.0 / std::sqrt(2.0), state.amplitudes, xv);
    const double var_x = xv.squaredNorm();
    // <P^2> = <a^dag a> + 1/2 - Re<a a> ; for a real state
    // <a a> = <psi| a a |psi> computed via ladder application
    double aa = 0.0;
    {
      Eigen::VectorXd tmp = Eigen::VectorXd::Zero(dim);
      const long stride = idx.strides[i];
      const int d = idx.dims[i];
      const long block = stride * d;
      for (long base = 0; base < dim; base += block)
        for (long off = 0; off < stride; ++off)
          for (int n = 2; n < d; ++n) {
            const long k = base + off + n * stride;
            tmp(k - 2 * stride) +=
                std::sqrt(double(n) * double(n - 1)) * state.amplitudes(k);
          }
      aa = state.amplitudes.dot(tmp);
    }
    QuadratureCovariance cov;
    cov.var_x = var_x;
    cov.var_p = obs.mean_n[i] + 0.5 - aa; // real state: <aa> real
    cov.cov_xp = 0.0;                     // vanishes for real ground states
    obs.covariance.push_back(cov);
  }
  return obs;
}

double converged_cavity_population(const ModeSystem& system, int initial_n_max,
                                   double tol) {
  int n_max = initial_n_max;
  TruncatedSystem t = TruncatedSystem::from_mode_system(system, n_max);
  double prev = oracle_observables(t, oracle_ground_state(t)).mean_n[0];
  for (;;) {
    n_max *= 2;
    TruncatedSystem t2 = TruncatedSystem::from_mode_system(system, n_max);
    const double cur = oracle_observables(t2, oracle_ground_state(t2)).mean_n[0];
    if (std::abs(cur - prev) < tol) return cur;
    prev = cur;
  }
}

} // namespace mpp
