#pragma once

// Brute-force construction in the full 2^n Hilbert space from Pauli
// matrices. Independent of the sector builders; used as their oracle.

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <span>

#include "qwsearch/hamiltonian.hpp"
#include "qwsearch/krylov.hpp"
#include "qwsearch/subspace.hpp"

namespace qwsearch {

inline constexpr int kMaxBruteForceSpins = 14;

/// Full-space index: spin i (1-based) is bit i-1 of the computational index.
/// (1/4) sum_{i != j} J_ij (X_i X_j + Y_i Y_j), assembled from Kronecker products.
SparseMatrix full_walk(const CouplingMatrix& J);

/// -1/2 sum_{m in marked} Z_m with Z = diag(+1, -1) on (|0>, |1>).
SparseMatrix full_mark(int n, std::span<const int> marked);

/// Rows/columns of `full` at weight-k indices, ordered by basis rank.
SparseHamiltonian restrict_to_sector(const SparseMatrix& full, const SubspaceBasis& basis);

/// Largest |entry| coupling the weight-k sector to any other weight.
double sector_leakage(const SparseMatrix& full, int k);

struct BruteForceState {
  State full;    // 2^n amplitudes
  State sector;  // rank-ordered amplitudes of the weight-k sector
};

/// gamma * full_walk + full_mark. The constructor checks that the full
/// operator has no entries leaving the weight-k block; evolution is exact
/// diagonalisation of that block, with every other amplitude kept at zero.
class BruteForceEngine {
 public:
  BruteForceEngine(int n, int k, std::span<const int> marked, const CouplingMatrix& J, double gamma);

  const SubspaceBasis& basis() const noexcept { return basis_; }
  const SparseMatrix& full_hamiltonian() const noexcept { return full_; }
  const SparseHamiltonian& sector_hamiltonian() const noexcept { return sector_; }

  /// `psi0` is a sector vector (rank order).
  BruteForceState evolve(const State& psi0, double t) const;

 private:
  SubspaceBasis basis_;
  SparseMatrix full_;
  SparseHamiltonian sector_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXd vectors_;
};

BruteForceState brute_force_engine(int n, int k, std::span<const int> marked,
                                   const CouplingMatrix& J, double gamma, const State& psi0,
                                   double t);

}  // namespace qwsearch
