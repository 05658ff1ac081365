#pragma once

// Search dynamics: propagation engines, fidelity curves, maximum search and
// hopping-rate optimisation.

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "qwsearch/full_space.hpp"
#include "qwsearch/hamiltonian.hpp"
#include "qwsearch/krylov.hpp"
#include "qwsearch/peaks.hpp"
#include "qwsearch/subspace.hpp"

namespace qwsearch {

/// 1/sqrt(N_k) on every basis string.
State uniform_state(const SubspaceBasis& basis);

struct PropagatorOptions {
  /// Dense eigendecomposition up to this dimension, Krylov above it.
  Eigen::Index dense_cutoff = 512;
  /// Fidelity series sample many times per Hamiltonian, so the one-off
  /// eigendecomposition is used up to this larger dimension.
  Eigen::Index series_dense_cutoff = 2048;
  KrylovOptions krylov;
};

State propagate(const SparseHamiltonian& H, const State& psi0, double t,
                const PropagatorOptions& options = {});

enum class Engine { Reduced, Sparse, BruteForce };

std::string to_string(Engine engine);
Engine engine_from_string(const std::string& name);

struct Coupling {
  enum class Kind { AllToAll, LongRange };
  Kind kind = Kind::AllToAll;
  double alpha = 0.0;

  static Coupling all_to_all() { return {}; }
  static Coupling long_range(double alpha) { return {Kind::LongRange, alpha}; }
  std::string label() const;
};

struct GammaSpec {
  bool optimize = false;
  double value = 0.0;  // fixed rate
  double lo = 0.0;     // optimisation range
  double hi = 0.0;

  static GammaSpec fixed(double g) { return {false, g, 0.0, 0.0}; }
  static GammaSpec range(double lo, double hi) { return {true, 0.0, lo, hi}; }
};

struct SearchConfig {
  int n = 0;
  int k = 0;
  std::vector<int> marked;  // 1-based; empty means {1..k}
  Coupling coupling;
  GammaSpec gamma;
  double t_max = 0.0;  // 0 means 10 sqrt(n)
  int grid_points = 2000;
  Engine engine = Engine::Sparse;
  PeakOptions peak;
  PropagatorOptions propagator;
  BasisOptions basis;
  int jobs = 1;  // threads for the gamma scan

  std::vector<int> marked_sites() const;
  double window_end() const;
  CouplingMatrix coupling_matrix() const;
};

/// Throws InvalidArgs / EngineMismatch for inconsistent configurations.
void validate(const SearchConfig& config);

struct SeriesMeta {
  int n = 0;
  int k = 0;
  double gamma = 0.0;
  std::string coupling;
  std::string engine;
  std::vector<int> marked;
};

struct FidelitySeries {
  std::vector<double> times;
  std::vector<double> values;
  SeriesMeta meta;
  double max_value = 0.0;     // largest sampled value
  double argmax_time = 0.0;   // its grid time
};

struct MaxFidelity {
  double value = 0.0;
  double time = 0.0;
  double gamma = 0.0;
  bool boundary = false;  // maximum on the window edge (warning)
};

struct GammaOptimum {
  double gamma = 0.0;
  double value = 0.0;
  double time = 0.0;
  bool boundary = false;        // gamma* within 1% of the range edge (warning)
  bool time_boundary = false;   // the time maximum at gamma* is on the window edge
};

/// F(t) on `grid_points` equally spaced times in [0, window_end()]. With an
/// optimised gamma spec the series is produced at the optimal rate.
FidelitySeries fidelity_series(const SearchConfig& config);

MaxFidelity max_fidelity(const SearchConfig& config);

/// Coarse log-spaced scan (32 points) then golden-section refinement of
/// log(gamma) to relative 1e-4. The objective is max-over-time fidelity.
GammaOptimum optimize_gamma(const SearchConfig& config);

}  // namespace qwsearch
