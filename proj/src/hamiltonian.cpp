#include "qwsearch/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>
#include <vector>

#include "qwsearch/error.hpp"
#include "qwsearch/format.hpp"

namespace qwsearch {

CouplingMatrix::CouplingMatrix(Eigen::MatrixXd J) : J_(std::move(J)) {
  require(J_.rows() == J_.cols() && J_.rows() >= 1, ErrorCode::InvalidArgs,
          "coupling matrix must be square and non-empty");
  require(J_.rows() <= kMaxSpins, ErrorCode::InvalidArgs, "n > 64 is not supported");
  require(J_.allFinite(), ErrorCode::InvalidArgs, "coupling matrix has non-finite entries");
  for (Eigen::Index i = 0; i < J_.rows(); ++i) {
    require(J_(i, i) == 0.0, ErrorCode::InvalidArgs, "coupling matrix diagonal must be zero");
    for (Eigen::Index j = 0; j < i; ++j)
      require(J_(i, j) == J_(j, i), ErrorCode::InvalidArgs, "coupling matrix must be symmetric");
  }
}

CouplingMatrix CouplingMatrix::all_to_all(int n, double strength) {
  require(n >= 1, ErrorCode::InvalidArgs, "n must be positive");
  Eigen::MatrixXd J = Eigen::MatrixXd::Constant(n, n, strength);
  J.diagonal().setZero();
  return CouplingMatrix(std::move(J));
}

double CouplingMatrix::max_row_sum() const { return J_.cwiseAbs().rowwise().sum().maxCoeff(); }

CouplingMatrix long_range_couplings(int n, double alpha) {
  require(n >= 2, ErrorCode::InvalidArgs, "long-range couplings need n >= 2");
  require(std::isfinite(alpha) && alpha >= 0.0, ErrorCode::InvalidArgs,
          "alpha must be finite and non-negative");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double r = std::abs(i - j);
      J(i, j) = 0.5 * (std::pow(r, -alpha) + std::pow(n - r, -alpha));
    }
  return CouplingMatrix(std::move(J));
}

SparseHamiltonian::SparseHamiltonian(SparseMatrix m) : m_(std::move(m)) {
  require(m_.rows() == m_.cols(), ErrorCode::DimensionMismatch, "Hamiltonian must be square");
  m_.makeCompressed();
}

double SparseHamiltonian::norm_bound() const {
  // Largest absolute row sum bounds the spectral radius of a symmetric matrix.
  double best = 0.0;
  for (Eigen::Index r = 0; r < m_.outerSize(); ++r) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(m_, r); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

namespace {

void require_edge(const BasisState& a, const BasisState& b) {
  require(a.n == b.n, ErrorCode::LengthMismatch, "strings differ in length");
  require(a.popcount() == b.popcount() && std::popcount(a.word ^ b.word) == 2,
          ErrorCode::NotAnEdge, a.to_string() + " and " + b.to_string() + " are not one hop apart");
}

}  // namespace

double effective_coupling(const BasisState& a, const BasisState& b, const CouplingMatrix& J) {
  require_edge(a, b);
  require(J.n() == a.n, ErrorCode::DimensionMismatch, "coupling size differs from string length");
  const std::uint64_t diff = a.word ^ b.word;
  const int p = std::countr_zero(diff);
  const int q = 63 - std::countl_zero(diff);
  return J(p, q);
}

double literal_string_coupling(const BasisState& a, const BasisState& b,
                               const CouplingMatrix& J) {
  require_edge(a, b);
  require(J.n() == a.n, ErrorCode::DimensionMismatch, "coupling size differs from string length");
  double sum = 0.0;
  for (int i = 0; i < a.n; ++i) {
    const int di = int(a.occupied(i)) - int(b.occupied(i));
    if (di == 0) continue;
    for (int j = 0; j < a.n; ++j) {
      const int dj = int(b.occupied(j)) - int(a.occupied(j));
      sum += J(i, j) * di * dj;
    }
  }
  return sum;
}

SparseHamiltonian build_walk(const SubspaceBasis& basis, const CouplingMatrix& J) {
  require(J.n() == basis.n(), ErrorCode::DimensionMismatch,
          "coupling matrix is " + std::to_string(J.n()) + " spins, basis has " +
              std::to_string(basis.n()));
  const int n = basis.n();
  const auto words = basis.words();
  const auto dim = static_cast<Eigen::Index>(words.size());
  const std::uint64_t all = n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;

  SparseMatrix m(dim, dim);
  m.reserve(Eigen::VectorXi::Constant(dim, basis.k() * (n - basis.k())));
  std::vector<std::pair<Eigen::Index, double>> row;
  for (Eigen::Index r = 0; r < dim; ++r) {
    row.clear();
    const std::uint64_t a = words[static_cast<std::size_t>(r)];
    for (std::uint64_t occ = a; occ; occ &= occ - 1) {
      const int p = std::countr_zero(occ);
      for (std::uint64_t emp = ~a & all; emp; emp &= emp - 1) {
        const int q = std::countr_zero(emp);
        const double v = J(p, q);
        if (v == 0.0) continue;
        const std::uint64_t b = a ^ (std::uint64_t{1} << p) ^ (std::uint64_t{1} << q);
        row.emplace_back(static_cast<Eigen::Index>(basis.rank(BasisState{b, n})), v);
      }
    }
    std::sort(row.begin(), row.end());
    for (const auto& [c, v] : row) m.insert(r, c) = v;
  }
  return SparseHamiltonian(std::move(m));
}

SparseHamiltonian build_mark(const SubspaceBasis& basis, std::span<const int> marked) {
  require(static_cast<int>(marked.size()) == basis.k(), ErrorCode::WrongMarkCount,
          std::to_string(marked.size()) + " marked sites for k = " + std::to_string(basis.k()));
  const BasisState w = BasisState::from_sites(basis.n(), marked);
  const auto words = basis.words();
  const auto dim = static_cast<Eigen::Index>(words.size());
  const double offset = 0.5 * basis.k();

  SparseMatrix m(dim, dim);
  m.reserve(Eigen::VectorXi::Constant(dim, 1));
  for (Eigen::Index r = 0; r < dim; ++r) {
    const double c = std::popcount(words[static_cast<std::size_t>(r)] & w.word) - offset;
    m.insert(r, r) = c;
  }
  return SparseHamiltonian(std::move(m));
}

SparseHamiltonian build_search(const SparseHamiltonian& walk, const SparseHamiltonian& mark,
                               double gamma) {
  require(walk.dim() == mark.dim(), ErrorCode::DimensionMismatch,
          "walk and mark dimensions differ");
  require(std::isfinite(gamma) && gamma >= 0.0, ErrorCode::InvalidArgs,
          "gamma must be finite and non-negative");
  SparseMatrix sum = gamma * walk.matrix() + mark.matrix();
  sum.prune([](Eigen::Index, Eigen::Index, double v) { return v != 0.0; });
  return SparseHamiltonian(std::move(sum));
}

void write_coordinate(std::ostream& os, const SparseHamiltonian& H) {
  const SparseMatrix& m = H.matrix();
  os << m.rows() << ' ' << m.nonZeros() << '\n';
  for (Eigen::Index r = 0; r < m.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(m, r); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << format_fixed17(it.value()) << '\n';
}

}  // namespace qwsearch
