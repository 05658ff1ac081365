#include "qwsearch/krylov.hpp"

#include <cmath>

#include "qwsearch/error.hpp"
#include "qwsearch/spectral.hpp"

namespace qwsearch {

KrylovPropagator::KrylovPropagator(const SparseHamiltonian& H, KrylovOptions options)
    : H_(H.matrix()), options_(options), scale_(std::max(H.norm_bound(), 1e-300)) {
  require(options_.subspace_dim >= 2, ErrorCode::InvalidArgs, "Krylov dimension must be >= 2");
  require(options_.tolerance > 0.0, ErrorCode::InvalidArgs, "Krylov tolerance must be positive");
}

bool KrylovPropagator::try_step(const State& psi, double dt, State& out) const {
  const double beta0 = psi.norm();
  if (beta0 == 0.0) {
    out = psi;
    return true;
  }
  const Eigen::Index dim = psi.size();
  const int m = static_cast<int>(std::min<Eigen::Index>(options_.subspace_dim, dim));
  Eigen::MatrixXcd V(dim, m);
  Eigen::VectorXd alpha(m);
  Eigen::VectorXd beta(m);
  V.col(0) = psi / beta0;

  const double breakdown = 1e-13 * scale_;
  for (int j = 0; j < m; ++j) {
    State w = H_ * V.col(j);
    alpha(j) = V.col(j).dot(w).real();
    w -= alpha(j) * V.col(j);
    if (j > 0) w -= beta(j - 1) * V.col(j - 1);
    // Full reorthogonalisation, twice is enough.
    for (int pass = 0; pass < 2; ++pass) w -= V.leftCols(j + 1) * (V.leftCols(j + 1).adjoint() * w);
    beta(j) = w.norm();

    const int d = j + 1;
    const auto small = SpectralPropagator<double>::from_tridiagonal(alpha.head(d), beta.head(d - 1));
    State e1 = State::Zero(d);
    e1(0) = 1.0;
    const State y = small.evolve(e1, dt);
    const double err = beta0 * beta(j) * std::abs(y(d - 1));
    const bool exhausted = (d == dim);
    if (beta(j) < breakdown || err < options_.tolerance || exhausted) {
      out = beta0 * (V.leftCols(d) * y);
      return true;
    }
    if (j + 1 < m) V.col(j + 1) = w / beta(j);
  }
  return false;
}

State KrylovPropagator::evolve(const State& psi, double t) const {
  require(psi.size() == H_.rows(), ErrorCode::DimensionMismatch, "state size differs from H");
  require(std::isfinite(t), ErrorCode::InvalidArgs, "time must be finite");
  if (t == 0.0) return psi;

  State current = psi;
  State next;
  double done = 0.0;
  double dt = t;
  int halvings = 0;
  int substeps = 0;
  while (done != t) {
    const double remaining = t - done;
    if (std::abs(dt) > std::abs(remaining)) dt = remaining;
    if (try_step(current, dt, next)) {
      current.swap(next);
      done = (std::abs(remaining - dt) == 0.0) ? t : done + dt;
      if (++substeps > options_.max_substeps)
        throw Error(ErrorCode::ConvergenceFailure, "Krylov propagation exceeded substep cap");
      halvings = 0;
    } else {
      dt *= 0.5;
      if (++halvings > 60)
        throw Error(ErrorCode::ConvergenceFailure,
                    "Krylov step did not reach tolerance; reduce the step or tolerance");
    }
  }
  return current;
}

}  // namespace qwsearch
