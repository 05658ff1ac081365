#include "qwsearch/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "qwsearch/error.hpp"
#include "qwsearch/format.hpp"
#include "qwsearch/parallel.hpp"
#include "qwsearch/reduced.hpp"
#include "qwsearch/spectral.hpp"

namespace qwsearch {

State uniform_state(const SubspaceBasis& basis) {
  const auto dim = static_cast<Eigen::Index>(basis.size());
  return State::Constant(dim, std::complex<double>(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
}

State propagate(const SparseHamiltonian& H, const State& psi0, double t,
                const PropagatorOptions& options) {
  require(psi0.size() == H.dim(), ErrorCode::DimensionMismatch, "state size differs from H");
  require(std::isfinite(t), ErrorCode::InvalidArgs, "time must be finite");
  if (t == 0.0) return psi0;
  if (H.dim() <= options.dense_cutoff)
    return SpectralPropagator<double>::from_dense(H.dense()).evolve(psi0, t);
  return KrylovPropagator(H, options.krylov).evolve(psi0, t);
}

std::string to_string(Engine engine) {
  switch (engine) {
    case Engine::Reduced: return "reduced";
    case Engine::Sparse: return "sparse";
    case Engine::BruteForce: return "brute-force";
  }
  return "unknown";
}

Engine engine_from_string(const std::string& name) {
  if (name == "reduced") return Engine::Reduced;
  if (name == "sparse") return Engine::Sparse;
  if (name == "brute-force" || name == "brute_force") return Engine::BruteForce;
  throw Error(ErrorCode::InvalidArgs, "unknown engine '" + name + "'");
}

std::string Coupling::label() const {
  if (kind == Kind::AllToAll) return "all-to-all";
  return "long-range(alpha=" + format_shortest(alpha) + ")";
}

std::vector<int> SearchConfig::marked_sites() const {
  if (!marked.empty()) return marked;
  std::vector<int> sites(static_cast<std::size_t>(std::max(k, 0)));
  std::iota(sites.begin(), sites.end(), 1);
  return sites;
}

double SearchConfig::window_end() const {
  return t_max > 0.0 ? t_max : 10.0 * std::sqrt(static_cast<double>(n));
}

CouplingMatrix SearchConfig::coupling_matrix() const {
  if (coupling.kind == Coupling::Kind::AllToAll) return CouplingMatrix::all_to_all(n);
  return long_range_couplings(n, coupling.alpha);
}

void validate(const SearchConfig& config) {
  require(config.n >= 1, ErrorCode::InvalidArgs, "n must be positive");
  if (config.engine != Engine::Reduced)
    require(config.n <= kMaxSpins, ErrorCode::InvalidArgs, "n must lie in 1..64");
  require(config.k >= 1 && config.k <= config.n, ErrorCode::InvalidArgs, "k must lie in 1..n");
  if (!config.marked.empty()) {
    require(static_cast<int>(config.marked.size()) == config.k, ErrorCode::WrongMarkCount,
            "expected " + std::to_string(config.k) + " marked sites");
    auto sorted = config.marked;
    std::sort(sorted.begin(), sorted.end());
    require(sorted.front() >= 1 && sorted.back() <= config.n, ErrorCode::InvalidArgs,
            "marked sites must lie in 1..n");
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
            ErrorCode::InvalidArgs, "marked sites must be distinct");
  }
  require(std::isfinite(config.t_max) && config.t_max >= 0.0, ErrorCode::InvalidArgs,
          "t_max must be positive (or 0 for the default window)");
  require(config.jobs >= 1, ErrorCode::InvalidArgs, "jobs must be positive");
  require(config.grid_points >= 3, ErrorCode::InvalidArgs, "need at least 3 grid points");
  if (config.coupling.kind == Coupling::Kind::LongRange)
    require(std::isfinite(config.coupling.alpha) && config.coupling.alpha >= 0.0,
            ErrorCode::InvalidArgs, "alpha must be finite and non-negative");
  if (config.gamma.optimize) {
    require(std::isfinite(config.gamma.hi) && config.gamma.lo > 0.0 &&
                config.gamma.lo <= config.gamma.hi,
            ErrorCode::InvalidArgs, "gamma range needs 0 < lo <= hi");
  } else {
    require(std::isfinite(config.gamma.value) && config.gamma.value >= 0.0,
            ErrorCode::InvalidArgs, "gamma must be finite and non-negative");
  }
  if (config.engine == Engine::Reduced) {
    require(config.coupling.kind == Coupling::Kind::AllToAll, ErrorCode::EngineMismatch,
            "the reduced engine requires all-to-all coupling");
    require(2 * config.k <= config.n, ErrorCode::InvalidArgs,
            "the reduced engine requires k <= n/2");
  }
  if (config.engine == Engine::BruteForce)
    require(config.n <= kMaxBruteForceSpins, ErrorCode::CapacityExceeded,
            "brute-force engine is limited to n <= " + std::to_string(kMaxBruteForceSpins));
}

namespace {

std::vector<double> time_grid(double t_end, int points) {
  std::vector<double> times(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) times[i] = t_end * i / (points - 1);
  return times;
}

// |<w| exp(-iHt) |s_k>|^2 for one engine at one hopping rate.
class FidelityModel {
 public:
  virtual ~FidelityModel() = default;
  virtual double at(double t) = 0;
  // `times` ascending.
  virtual std::vector<double> sample(const std::vector<double>& times) {
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(at(t));
    return out;
  }
};

class SpectralModel final : public FidelityModel {
 public:
  explicit SpectralModel(SpectralPropagator<double>::TargetAmplitude amp) : amp_(std::move(amp)) {}
  double at(double t) override { return amp_.probability(t); }

 private:
  SpectralPropagator<double>::TargetAmplitude amp_;
};

class KrylovModel final : public FidelityModel {
 public:
  KrylovModel(const SparseHamiltonian& H, State psi0, Eigen::Index target, KrylovOptions options)
      : prop_(H, options), target_(target) {
    checkpoints_.push_back({0.0, std::move(psi0)});
  }

  double at(double t) override {
    const Anchor* start = &checkpoints_.front();
    for (const auto& c : checkpoints_)
      if (std::abs(c.time - t) < std::abs(start->time - t)) start = &c;
    if (anchor_ && std::abs(anchor_->time - t) < std::abs(start->time - t)) start = &*anchor_;
    State psi = prop_.evolve(start->state, t - start->time);
    const double f = std::norm(psi(target_));
    anchor_ = Anchor{t, std::move(psi)};
    return f;
  }

  std::vector<double> sample(const std::vector<double>& times) override {
    std::vector<double> out;
    out.reserve(times.size());
    double t_prev = checkpoints_.front().time;
    State psi = checkpoints_.front().state;
    for (std::size_t i = 0; i < times.size(); ++i) {
      psi = prop_.evolve(psi, times[i] - t_prev);
      t_prev = times[i];
      out.push_back(std::norm(psi(target_)));
      if (i > 0 && i % kCheckpointStride == 0) checkpoints_.push_back({t_prev, psi});
    }
    return out;
  }

 private:
  struct Anchor {
    double time;
    State state;
  };
  static constexpr std::size_t kCheckpointStride = 64;

  KrylovPropagator prop_;
  Eigen::Index target_;
  std::vector<Anchor> checkpoints_;
  std::optional<Anchor> anchor_;
};

class BruteForceModel final : public FidelityModel {
 public:
  BruteForceModel(BruteForceEngine engine, State psi0, Eigen::Index target)
      : engine_(std::move(engine)), psi0_(std::move(psi0)), target_(target) {}
  double at(double t) override { return std::norm(engine_.evolve(psi0_, t).sector(target_)); }

 private:
  BruteForceEngine engine_;
  State psi0_;
  Eigen::Index target_;
};

// Everything about a configuration that does not depend on gamma.
class SearchProblem {
 public:
  explicit SearchProblem(const SearchConfig& config) : config_(config) {
    validate(config_);
    marked_ = config_.marked_sites();
    if (config_.engine == Engine::Sparse) {
      basis_.emplace(enumerate_basis(config_.n, config_.k, config_.basis));
      walk_ = build_walk(*basis_, config_.coupling_matrix());
      mark_ = build_mark(*basis_, marked_);
      target_ = static_cast<Eigen::Index>(basis_->rank(BasisState::from_sites(config_.n, marked_)));
    } else if (config_.engine == Engine::BruteForce) {
      basis_.emplace(enumerate_basis(config_.n, config_.k, config_.basis));
      target_ = static_cast<Eigen::Index>(basis_->rank(BasisState::from_sites(config_.n, marked_)));
    }
  }

  const SearchConfig& config() const noexcept { return config_; }
  const std::vector<int>& marked() const noexcept { return marked_; }

  std::unique_ptr<FidelityModel> model(double gamma) const {
    using Prop = SpectralPropagator<double>;
    switch (config_.engine) {
      case Engine::Reduced: {
        const ReducedHamiltonian h = build_reduced(config_.n, config_.k, gamma);
        const State psi0 = initial_reduced_state(config_.n, config_.k).cast<std::complex<double>>();
        return std::make_unique<SpectralModel>(
            Prop::from_tridiagonal(h.diag, h.offdiag).target_amplitude(0, psi0));
      }
      case Engine::Sparse: {
        const SparseHamiltonian H = build_search(walk_, mark_, gamma);
        State psi0 = uniform_state(*basis_);
        if (H.dim() <= config_.propagator.series_dense_cutoff)
          return std::make_unique<SpectralModel>(
              Prop::from_dense(H.dense()).target_amplitude(target_, psi0));
        return std::make_unique<KrylovModel>(H, std::move(psi0), target_, config_.propagator.krylov);
      }
      case Engine::BruteForce:
        return std::make_unique<BruteForceModel>(
            BruteForceEngine(config_.n, config_.k, marked_, config_.coupling_matrix(), gamma),
            uniform_state(*basis_), target_);
    }
    throw Error(ErrorCode::InvalidArgs, "unknown engine");
  }

  MaxFidelity max_at(double gamma) const {
    auto m = model(gamma);
    const auto times = time_grid(config_.window_end(), config_.grid_points);
    const auto values = m->sample(times);
    const double tol = 1e-9 * config_.window_end();
    const Peak p = locate_peak(times, values, [&](double t) { return m->at(t); }, tol, config_.peak);
    return MaxFidelity{std::clamp(p.value, 0.0, 1.0), p.location, gamma, p.on_boundary};
  }

 private:
  SearchConfig config_;
  std::vector<int> marked_;
  std::optional<SubspaceBasis> basis_;
  SparseHamiltonian walk_;
  SparseHamiltonian mark_;
  Eigen::Index target_ = 0;
};

GammaOptimum optimize(const SearchProblem& problem) {
  const GammaSpec& spec = problem.config().gamma;
  const double lo = spec.lo;
  const double hi = spec.hi;
  auto finish = [&](const MaxFidelity& best) {
    GammaOptimum out{best.gamma, best.value, best.time, false, best.boundary};
    if (hi > lo) out.boundary = best.gamma <= lo * 1.01 || best.gamma >= hi / 1.01;
    return out;
  };
  if (lo == hi) return finish(problem.max_at(lo));

  constexpr int kScan = 32;
  const double log_lo = std::log(lo);
  const double log_hi = std::log(hi);
  std::vector<double> logs(kScan);
  std::vector<MaxFidelity> scan(kScan);
  for (int i = 0; i < kScan; ++i) logs[i] = log_lo + (log_hi - log_lo) * i / (kScan - 1);
  parallel_for(kScan, problem.config().jobs,
               [&](std::size_t i) { scan[i] = problem.max_at(std::exp(logs[i])); });
  int best = 0;
  for (int i = 1; i < kScan; ++i)
    if (scan[i].value > scan[best].value) best = i;

  const double a = logs[std::max(best - 1, 0)];
  const double b = logs[std::min(best + 1, kScan - 1)];
  const double refined = golden_section_maximize(
      [&](double lg) { return problem.max_at(std::exp(lg)).value; }, a, b, 1e-4);
  const MaxFidelity candidate = problem.max_at(std::exp(refined));
  return finish(candidate.value >= scan[best].value ? candidate : scan[best]);
}

}  // namespace

FidelitySeries fidelity_series(const SearchConfig& config) {
  const SearchProblem problem(config);
  const double gamma = config.gamma.optimize ? optimize(problem).gamma : config.gamma.value;
  auto model = problem.model(gamma);

  FidelitySeries series;
  series.times = time_grid(config.window_end(), config.grid_points);
  series.values = model->sample(series.times);
  for (double& v : series.values) v = std::clamp(v, 0.0, 1.0);
  series.meta = SeriesMeta{config.n, config.k, gamma, config.coupling.label(),
                           to_string(config.engine), problem.marked()};
  const auto it = std::max_element(series.values.begin(), series.values.end());
  series.max_value = *it;
  series.argmax_time = series.times[static_cast<std::size_t>(it - series.values.begin())];
  return series;
}

MaxFidelity max_fidelity(const SearchConfig& config) {
  const SearchProblem problem(config);
  if (config.gamma.optimize) {
    const GammaOptimum opt = optimize(problem);
    return MaxFidelity{opt.value, opt.time, opt.gamma, opt.time_boundary};
  }
  return problem.max_at(config.gamma.value);
}

GammaOptimum optimize_gamma(const SearchConfig& config) {
  require(config.gamma.optimize, ErrorCode::InvalidArgs,
          "optimize_gamma needs a gamma range in the configuration");
  return optimize(SearchProblem(config));
}

}  // namespace qwsearch
