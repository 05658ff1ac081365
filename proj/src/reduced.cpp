#include "qwsearch/reduced.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "qwsearch/error.hpp"
#include "qwsearch/parallel.hpp"
#include "qwsearch/spectral.hpp"

namespace qwsearch {

namespace {

Eigen::MatrixXd tridiagonal_dense(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag) {
  const Eigen::Index dim = diag.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  m.diagonal() = diag;
  for (Eigen::Index j = 0; j + 1 < dim; ++j) m(j, j + 1) = m(j + 1, j) = offdiag(j);
  return m;
}

void require_reduced_args(std::int64_t n, int k) {
  require(k >= 1, ErrorCode::InvalidArgs, "reduced dynamics needs k >= 1");
  require(2 * static_cast<std::int64_t>(k) <= n, ErrorCode::InvalidArgs,
          "k > n/2: flip all spins (k -> n-k) and solve that problem instead");
}

}  // namespace

Eigen::MatrixXd ReducedHamiltonian::dense() const { return tridiagonal_dense(diag, offdiag); }
Eigen::MatrixXd AsymptoticMatrix::dense() const {
  return tridiagonal_dense(Eigen::VectorXd::Zero(k + 1), offdiag);
}

ReducedHamiltonian build_reduced(std::int64_t n, int k, double gamma) {
  require_reduced_args(n, k);
  require(std::isfinite(gamma) && gamma >= 0.0, ErrorCode::InvalidArgs,
          "gamma must be finite and non-negative");
  ReducedHamiltonian h;
  h.n = n;
  h.k = k;
  h.gamma = gamma;
  h.diag.resize(k + 1);
  h.offdiag.resize(k);
  const auto nd = static_cast<double>(n);
  for (int j = 1; j <= k + 1; ++j) {
    const double walk = static_cast<double>(j - 1) * (nd + 2.0 - 2.0 * j);
    h.diag(j - 1) = gamma * walk + 0.5 * k + 1.0 - j;
  }
  for (int j = 1; j <= k; ++j) {
    const double hop = j * std::sqrt(static_cast<double>(k + 1 - j)) *
                       std::sqrt(nd + 1.0 - k - j);
    h.offdiag(j - 1) = gamma * hop;
  }
  return h;
}

Eigen::MatrixXd project_onto_classes(const SparseHamiltonian& H,
                                     const DistanceClassTable& classes) {
  const auto dim = static_cast<Eigen::Index>(classes.classes.size());
  Eigen::Index total = 0;
  for (const auto& c : classes.classes) total += static_cast<Eigen::Index>(c.size());
  require(total == H.dim(), ErrorCode::DimensionMismatch,
          "distance classes do not cover the Hamiltonian's basis");

  // Sum H over each pair of class blocks, then normalise once.
  std::vector<Eigen::Index> label(static_cast<std::size_t>(total));
  for (Eigen::Index q = 0; q < dim; ++q)
    for (std::size_t r : classes.classes[static_cast<std::size_t>(q)]) label[r] = q;
  std::vector<long double> sums(static_cast<std::size_t>(dim * dim), 0.0L);
  const SparseMatrix& m = H.matrix();
  for (Eigen::Index outer = 0; outer < m.outerSize(); ++outer)
    for (SparseMatrix::InnerIterator it(m, outer); it; ++it)
      sums[static_cast<std::size_t>(label[it.row()] * dim + label[it.col()])] += it.value();
  Eigen::MatrixXd P(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) {
      const long double di = classes.classes[static_cast<std::size_t>(i)].size();
      const long double dj = classes.classes[static_cast<std::size_t>(j)].size();
      P(i, j) = static_cast<double>(sums[static_cast<std::size_t>(i * dim + j)] / std::sqrt(di * dj));
    }
  return P;
}

AsymptoticMatrix build_Rk(int k) {
  require(k >= 1, ErrorCode::InvalidArgs, "R_k needs k >= 1");
  AsymptoticMatrix r;
  r.k = k;
  r.offdiag.resize(k);
  for (int j = 1; j <= k; ++j) r.offdiag(j - 1) = j * std::sqrt(static_cast<double>(k - j + 1));
  return r;
}

Eigen::VectorXd initial_reduced_state(std::int64_t n, int k) {
  require_reduced_args(n, k);
  // log(d_{k,q}) up to a common constant, via d_{q+1}/d_q = (k-q)(n-k-q)/(q+1)^2.
  Eigen::VectorXd logd(k + 1);
  logd(0) = 0.0;
  const auto nd = static_cast<double>(n);
  for (int q = 0; q < k; ++q)
    logd(q + 1) = logd(q) + std::log(static_cast<double>(k - q)) + std::log(nd - k - q) -
                  2.0 * std::log(static_cast<double>(q + 1));
  const double top = logd.maxCoeff();
  Eigen::VectorXd amp = ((logd.array() - top) * 0.5).exp();
  return amp / amp.norm();
}

Eigen::VectorXd asymptotic_initial_state(int k) {
  require(k >= 1, ErrorCode::InvalidArgs, "k must be positive");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(k + 1);
  e(k) = 1.0;
  return e;
}

AsymptoticEvolution::AsymptoticEvolution(int k) : k_(k) {
  const AsymptoticMatrix r = build_Rk(k);
  const auto prop =
      SpectralPropagator<double>::from_tridiagonal(Eigen::VectorXd::Zero(k + 1), r.offdiag);
  energies_ = prop.eigenvalues();
  weights_ = prop.eigenvectors().row(0).transpose().cwiseProduct(
      prop.eigenvectors().row(k).transpose());
}

double AsymptoticEvolution::fidelity(double tau) const {
  double re = 0.0;
  double im = 0.0;
  for (Eigen::Index m = 0; m < energies_.size(); ++m) {
    const double arg = energies_(m) * tau;
    re += weights_(m) * std::cos(arg);
    im -= weights_(m) * std::sin(arg);
  }
  return re * re + im * im;
}

double asymptotic_fidelity(int k, double tau) {
  require(std::isfinite(tau), ErrorCode::InvalidArgs, "tau must be finite");
  return AsymptoticEvolution(k).fidelity(tau);
}

double closed_form_F2(double tau) {
  const double c = std::cos(std::sqrt(6.0) * tau) - 1.0;
  return 2.0 / 9.0 * c * c;
}

double closed_form_F3(double tau) {
  const double s73 = std::sqrt(73.0);
  const double hi = std::sqrt(10.0 + s73);
  const double lo = std::sqrt(10.0 - s73);
  const double v = hi * std::sin(lo * tau) - lo * std::sin(hi * tau);
  return 2.0 / 73.0 * v * v;
}

AsymptoticMaximum max_asymptotic(int k, const AsymptoticWindow& window, const PeakOptions& peak) {
  require(window.step > 0.0 && window.tau_max > window.tau_min && window.tau_min >= 0.0,
          ErrorCode::InvalidArgs, "invalid tau window");
  const AsymptoticEvolution evo(k);
  const auto points =
      static_cast<std::size_t>(std::floor((window.tau_max - window.tau_min) / window.step)) + 1;
  std::vector<double> taus(points);
  std::vector<double> values(points);
  for (std::size_t i = 0; i < points; ++i) {
    taus[i] = window.tau_min + static_cast<double>(i) * window.step;
    values[i] = evo.fidelity(taus[i]);
  }
  const Peak p = locate_peak(taus, values, [&](double t) { return evo.fidelity(t); },
                             window.tolerance, peak);
  require(!p.on_boundary, ErrorCode::WindowTooSmall,
          "maximum for k = " + std::to_string(k) + " lies on the window edge");
  return AsymptoticMaximum{k, p.value, p.location};
}

std::vector<AsymptoticMaximum> asymptotic_table(int kmax, const AsymptoticWindow& window,
                                                const PeakOptions& peak, int jobs) {
  require(kmax >= 1, ErrorCode::InvalidArgs, "kmax must be positive");
  std::vector<AsymptoticMaximum> rows(static_cast<std::size_t>(kmax));
  parallel_for(rows.size(), jobs, [&](std::size_t i) {
    rows[i] = max_asymptotic(static_cast<int>(i) + 1, window, peak);
  });
  return rows;
}

void write_asymptotic_csv(std::ostream& os, const std::vector<AsymptoticMaximum>& table,
                          const Manifest& manifest) {
  os << manifest.to_comment_block();
  os << "k,max_fidelity,tau_star\n";
  for (const auto& row : table)
    os << row.k << ',' << format_shortest(row.fidelity) << ',' << format_shortest(row.tau) << '\n';
}

}  // namespace qwsearch
