#pragma once

#include <Eigen/Dense>

#include "qwsearch/hamiltonian.hpp"

namespace qwsearch {

using State = Eigen::VectorXcd;

struct KrylovOptions {
  int subspace_dim = 30;
  double tolerance = 1e-12;  // per accepted step, absolute
  int max_substeps = 1 << 20;
};

/// Short-iterate Lanczos propagator for exp(-iHt) psi with real symmetric H.
/// Steps that miss the tolerance within `subspace_dim` vectors are halved.
class KrylovPropagator {
 public:
  explicit KrylovPropagator(const SparseHamiltonian& H, KrylovOptions options = {});

  State evolve(const State& psi, double t) const;

 private:
  // One attempted step; returns false when the error estimate stays above
  // tolerance with a full Krylov basis.
  bool try_step(const State& psi, double dt, State& out) const;

  SparseMatrix H_;
  KrylovOptions options_;
  double scale_;
};

}  // namespace qwsearch
