#pragma once

// Walk, marking and search Hamiltonians restricted to a k-excitation sector.

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <iosfwd>
#include <span>

#include "qwsearch/subspace.hpp"

namespace qwsearch {

/// Symmetric spin-spin couplings J_ij (0-based storage) with zero diagonal.
class CouplingMatrix {
 public:
  explicit CouplingMatrix(Eigen::MatrixXd J);

  static CouplingMatrix all_to_all(int n, double strength = 1.0);

  int n() const noexcept { return static_cast<int>(J_.rows()); }
  double operator()(int i, int j) const { return J_(i, j); }
  const Eigen::MatrixXd& matrix() const noexcept { return J_; }

  /// Largest row sum; the natural walk energy scale.
  double max_row_sum() const;

 private:
  Eigen::MatrixXd J_;
};

/// Periodic power-law chain: J_ij = (|i-j|^-alpha + (n-|i-j|)^-alpha) / 2.
CouplingMatrix long_range_couplings(int n, double alpha);

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Real symmetric operator on a sector, indexed by basis rank. Both
/// triangles are stored and entries are sorted by (row, col).
class SparseHamiltonian {
 public:
  SparseHamiltonian() = default;
  explicit SparseHamiltonian(SparseMatrix m);

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const SparseMatrix& matrix() const noexcept { return m_; }
  Eigen::VectorXd diagonal() const { return m_.diagonal(); }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(m_); }

  /// Frobenius-norm based bound on the spectral radius.
  double norm_bound() const;

 private:
  SparseMatrix m_;
};

/// Hop amplitude between two strings one hop apart: J_pq for the two spins
/// p, q where they differ. This is the restriction of the XY Hamiltonian
/// (1/4) sum_{i!=j} J_ij (XX + YY).
double effective_coupling(const BasisState& a, const BasisState& b, const CouplingMatrix& J);

/// The string-space mapping evaluated literally as the ordered double sum
/// sum_{i,j} J_ij (a_i - b_i)(b_j - a_j). For symmetric J this is
/// 2 * effective_coupling; kept to document that normalisation.
double literal_string_coupling(const BasisState& a, const BasisState& b,
                               const CouplingMatrix& J);

SparseHamiltonian build_walk(const SubspaceBasis& basis, const CouplingMatrix& J);

/// Diagonal c_k(a) = (#excitations on marked sites) - k/2, i.e. the sector
/// restriction of -1/2 sum_{m in M} Z_m with Z = diag(+1, -1) on (|0>, |1>).
/// `marked` holds 1-based spin labels.
SparseHamiltonian build_mark(const SubspaceBasis& basis, std::span<const int> marked);

/// gamma * walk + mark.
SparseHamiltonian build_search(const SparseHamiltonian& walk, const SparseHamiltonian& mark,
                               double gamma);

/// Coordinate dump: header "dim nnz", then "row col value" lines with
/// 0-based ranks and 17 significant digits.
void write_coordinate(std::ostream& os, const SparseHamiltonian& H);

}  // namespace qwsearch
