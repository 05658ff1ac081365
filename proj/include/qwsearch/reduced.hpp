#pragma once

// Exact (k+1)-dimensional search dynamics on the distance-class frame
// {|w>, |d_1>, ..., |d_k>} and its large-n limit R_k.

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <vector>

#include "qwsearch/format.hpp"
#include "qwsearch/hamiltonian.hpp"
#include "qwsearch/peaks.hpp"
#include "qwsearch/subspace.hpp"

namespace qwsearch {

/// Symmetric tridiagonal search Hamiltonian for all-to-all couplings:
///   diag[j-1]    = gamma (j-1)(n+2-2j) + k/2 + 1 - j,          j = 1..k+1
///   offdiag[j-1] = gamma j sqrt(k+1-j) sqrt(n+1-k-j),          j = 1..k
/// obtained from the collective-spin form of the walk and marking terms.
struct ReducedHamiltonian {
  std::int64_t n = 0;
  int k = 0;
  double gamma = 0.0;
  Eigen::VectorXd diag;
  Eigen::VectorXd offdiag;

  Eigen::MatrixXd dense() const;
};

ReducedHamiltonian build_reduced(std::int64_t n, int k, double gamma);

/// <d_i| H |d_j> on the distance-class frame of `classes`.
Eigen::MatrixXd project_onto_classes(const SparseHamiltonian& H, const DistanceClassTable& classes);

/// R_k: zero diagonal, (R_k)_{j,j+1} = j sqrt(k-j+1).
struct AsymptoticMatrix {
  int k = 0;
  Eigen::VectorXd offdiag;

  Eigen::MatrixXd dense() const;
};

AsymptoticMatrix build_Rk(int k);

/// Uniform superposition on the frame: component q is sqrt(d_{k,q} / N_k).
/// Evaluated through ratios of consecutive class sizes, so n may be huge.
Eigen::VectorXd initial_reduced_state(std::int64_t n, int k);

/// n -> infinity limit of the initial state: all weight on |d_{k,k}>.
Eigen::VectorXd asymptotic_initial_state(int k);

/// |<1| exp(-i R_k tau) |k+1>|^2 with the eigendecomposition of R_k cached.
class AsymptoticEvolution {
 public:
  explicit AsymptoticEvolution(int k);
  int k() const noexcept { return k_; }
  double fidelity(double tau) const;

 private:
  int k_;
  Eigen::VectorXd energies_;
  Eigen::VectorXd weights_;  // V(0, m) V(k, m)
};

double asymptotic_fidelity(int k, double tau);

/// (2/9)(cos(sqrt6 tau) - 1)^2
double closed_form_F2(double tau);
/// (2/73)(sqrt(10+sqrt73) sin(sqrt(10-sqrt73) tau) - sqrt(10-sqrt73) sin(sqrt(10+sqrt73) tau))^2
double closed_form_F3(double tau);

struct AsymptoticWindow {
  double tau_min = 0.0;
  double tau_max = 4.0 * std::numbers::pi;
  double step = 1e-3;
  double tolerance = 1e-10;
};

struct AsymptoticMaximum {
  int k = 0;
  double fidelity = 0.0;
  double tau = 0.0;  // t_inf^(k) / sqrt(n)
};

/// Throws WindowTooSmall when the maximum sits on the window edge.
AsymptoticMaximum max_asymptotic(int k, const AsymptoticWindow& window = {},
                                 const PeakOptions& peak = {});

/// Rows k = 1..kmax. `jobs` > 1 spreads rows over threads; row order and
/// values do not depend on it.
std::vector<AsymptoticMaximum> asymptotic_table(int kmax, const AsymptoticWindow& window = {},
                                                const PeakOptions& peak = {}, int jobs = 1);

/// CSV with columns k,max_fidelity,tau_star and the manifest as comments.
void write_asymptotic_csv(std::ostream& os, const std::vector<AsymptoticMaximum>& table,
                          const Manifest& manifest);

}  // namespace qwsearch
