#include "qwsearch/full_space.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <unsupported/Eigen/KroneckerProduct>
#include <vector>

#include "qwsearch/error.hpp"

namespace qwsearch {

namespace {

using ComplexSparse = Eigen::SparseMatrix<std::complex<double>, Eigen::RowMajor>;
using cd = std::complex<double>;

ComplexSparse pauli(char which) {
  ComplexSparse p(2, 2);
  switch (which) {
    case 'x':
      p.insert(0, 1) = 1.0;
      p.insert(1, 0) = 1.0;
      break;
    case 'y':
      p.insert(0, 1) = cd(0.0, -1.0);
      p.insert(1, 0) = cd(0.0, 1.0);
      break;
    case 'z':
      p.insert(0, 0) = 1.0;
      p.insert(1, 1) = -1.0;
      break;
    default:
      break;
  }
  return p;
}

ComplexSparse identity(std::int64_t dim) {
  ComplexSparse id(dim, dim);
  id.setIdentity();
  return id;
}

// Operator `op` acting on 0-based spin `site`, which sits at bit `site` of
// the full index, so more significant spins go to the left of the product.
ComplexSparse on_site(const ComplexSparse& op, int site, int n) {
  const ComplexSparse left = identity(std::int64_t{1} << (n - 1 - site));
  const ComplexSparse right = identity(std::int64_t{1} << site);
  ComplexSparse partial = Eigen::kroneckerProduct(left, op);
  return Eigen::kroneckerProduct(partial, right);
}

SparseMatrix real_part_checked(const ComplexSparse& m) {
  SparseMatrix out(m.rows(), m.cols());
  std::vector<Eigen::Triplet<double>> triplets;
  for (Eigen::Index r = 0; r < m.outerSize(); ++r)
    for (ComplexSparse::InnerIterator it(m, r); it; ++it) {
      require(it.value().imag() == 0.0, ErrorCode::InvalidArgs,
              "full-space Hamiltonian is not real");
      if (it.value().real() != 0.0) triplets.emplace_back(it.row(), it.col(), it.value().real());
    }
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

void require_brute_force_size(int n) {
  require(n >= 1, ErrorCode::InvalidArgs, "n must be positive");
  require(n <= kMaxBruteForceSpins, ErrorCode::CapacityExceeded,
          "brute-force engine is limited to n <= " + std::to_string(kMaxBruteForceSpins));
}

}  // namespace

SparseMatrix full_walk(const CouplingMatrix& J) {
  const int n = J.n();
  require_brute_force_size(n);
  const auto dim = std::int64_t{1} << n;
  std::vector<ComplexSparse> xs;
  std::vector<ComplexSparse> ys;
  for (int s = 0; s < n; ++s) {
    xs.push_back(on_site(pauli('x'), s, n));
    ys.push_back(on_site(pauli('y'), s, n));
  }
  ComplexSparse total(dim, dim);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j || J(i, j) == 0.0) continue;
      const ComplexSparse xx = xs[i] * xs[j];
      const ComplexSparse yy = ys[i] * ys[j];
      const ComplexSparse pair = xx + yy;
      total = total + pair * cd(J(i, j) / 4.0, 0.0);
    }
  return real_part_checked(total);
}

SparseMatrix full_mark(int n, std::span<const int> marked) {
  require_brute_force_size(n);
  const auto dim = std::int64_t{1} << n;
  ComplexSparse total(dim, dim);
  for (int site : marked) {
    require(site >= 1 && site <= n, ErrorCode::InvalidArgs, "marked site out of range");
    total = total + on_site(pauli('z'), site - 1, n) * cd(-0.5, 0.0);
  }
  return real_part_checked(total);
}

SparseHamiltonian restrict_to_sector(const SparseMatrix& full, const SubspaceBasis& basis) {
  require(full.rows() == (std::int64_t{1} << basis.n()), ErrorCode::DimensionMismatch,
          "full-space operator does not match the basis' spin count");
  const auto words = basis.words();
  const auto dim = static_cast<Eigen::Index>(words.size());
  std::vector<Eigen::Triplet<double>> triplets;
  for (Eigen::Index r = 0; r < dim; ++r) {
    const auto row = static_cast<Eigen::Index>(words[static_cast<std::size_t>(r)]);
    for (SparseMatrix::InnerIterator it(full, row); it; ++it) {
      const auto col = static_cast<std::uint64_t>(it.col());
      if (std::popcount(col) != basis.k()) continue;
      const auto c = static_cast<Eigen::Index>(basis.rank(BasisState{col, basis.n()}));
      triplets.emplace_back(r, c, it.value());
    }
  }
  SparseMatrix m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return SparseHamiltonian(std::move(m));
}

double sector_leakage(const SparseMatrix& full, int k) {
  double worst = 0.0;
  for (Eigen::Index r = 0; r < full.outerSize(); ++r) {
    const bool row_in = std::popcount(static_cast<std::uint64_t>(r)) == k;
    for (SparseMatrix::InnerIterator it(full, r); it; ++it) {
      const bool col_in = std::popcount(static_cast<std::uint64_t>(it.col())) == k;
      if (row_in != col_in) worst = std::max(worst, std::abs(it.value()));
    }
  }
  return worst;
}

BruteForceEngine::BruteForceEngine(int n, int k, std::span<const int> marked,
                                   const CouplingMatrix& J, double gamma)
    : basis_(enumerate_basis(n, k)) {
  require_brute_force_size(n);
  require(J.n() == n, ErrorCode::DimensionMismatch, "coupling matrix size differs from n");
  require(static_cast<int>(marked.size()) == k, ErrorCode::WrongMarkCount,
          "brute-force engine needs exactly k marked sites");
  require(std::isfinite(gamma) && gamma >= 0.0, ErrorCode::InvalidArgs,
          "gamma must be finite and non-negative");
  full_ = SparseMatrix(gamma * full_walk(J) + full_mark(n, marked));
  require(sector_leakage(full_, k) == 0.0, ErrorCode::InvalidArgs,
          "full-space Hamiltonian does not conserve excitation number");
  sector_ = restrict_to_sector(full_, basis_);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sector_.dense());
  require(solver.info() == Eigen::Success, ErrorCode::ConvergenceFailure,
          "brute-force eigensolver did not converge");
  energies_ = solver.eigenvalues();
  vectors_ = solver.eigenvectors();
}

BruteForceState BruteForceEngine::evolve(const State& psi0, double t) const {
  require(psi0.size() == static_cast<Eigen::Index>(basis_.size()), ErrorCode::DimensionMismatch,
          "initial state must be a sector vector");
  State coeff = vectors_.transpose().cast<cd>() * psi0;
  for (Eigen::Index m = 0; m < coeff.size(); ++m)
    coeff(m) *= cd(std::cos(energies_(m) * t), -std::sin(energies_(m) * t));
  BruteForceState out;
  out.sector = vectors_.cast<cd>() * coeff;
  out.full = State::Zero(std::int64_t{1} << basis_.n());
  const auto words = basis_.words();
  for (std::size_t r = 0; r < words.size(); ++r)
    out.full(static_cast<Eigen::Index>(words[r])) = out.sector(static_cast<Eigen::Index>(r));
  return out;
}

BruteForceState brute_force_engine(int n, int k, std::span<const int> marked,
                                   const CouplingMatrix& J, double gamma, const State& psi0,
                                   double t) {
  return BruteForceEngine(n, k, marked, J, gamma).evolve(psi0, t);
}

}  // namespace qwsearch
