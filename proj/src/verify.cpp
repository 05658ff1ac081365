#include "qwsearch/verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "qwsearch/cli.hpp"
#include "qwsearch/error.hpp"
#include "qwsearch/evolve.hpp"
#include "qwsearch/full_space.hpp"
#include "qwsearch/protocols.hpp"
#include "qwsearch/reduced.hpp"

namespace qwsearch::cli {

namespace {

using std::numbers::pi;

std::vector<int> first_sites(int k) {
  std::vector<int> m(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) m[i] = i + 1;
  return m;
}

Eigen::MatrixXd random_couplings(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.2, 1.5);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) J(i, j) = J(j, i) = u(rng);
  return J;
}

SearchConfig reduced_config(int n, int k, double gamma) {
  SearchConfig c;
  c.n = n;
  c.k = k;
  c.engine = Engine::Reduced;
  c.gamma = GammaSpec::fixed(gamma);
  return c;
}

double triangle_error(int n, int k, double gamma, double t_max, int points) {
  SearchConfig c = reduced_config(n, k, gamma);
  c.t_max = t_max;
  c.grid_points = points;
  const auto reduced = fidelity_series(c);
  c.engine = Engine::Sparse;
  const auto sparse = fidelity_series(c);
  double err = 0.0;
  for (std::size_t i = 0; i < reduced.values.size(); ++i)
    err = std::max(err, std::abs(reduced.values[i] - sparse.values[i]));
  return err;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Suite {
 public:
  explicit Suite(VerifyReport& report) : report_(report) {}

  // `body` returns the observed error; a thrown exception fails the check.
  void add(const std::string& name, double tolerance, const std::function<double(std::string&)>& body) {
    Check c;
    c.name = name;
    c.tolerance = tolerance;
    try {
      c.observed = body(c.detail);
      c.passed = std::isfinite(c.observed) && c.observed <= tolerance;
    } catch (const std::exception& e) {
      c.observed = std::numeric_limits<double>::infinity();
      c.detail = e.what();
      c.passed = false;
    }
    report_.checks.push_back(std::move(c));
  }

 private:
  VerifyReport& report_;
};

}  // namespace

bool VerifyReport::passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::string VerifyReport::to_json() const {
  nlohmann::ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["mode"] = mode;
  j["seed"] = seed;
  j["passed"] = passed();
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["tolerance"] = c.tolerance;
    e["observed_error"] = std::isfinite(c.observed) ? nlohmann::ordered_json(c.observed)
                                                    : nlohmann::ordered_json("inf");
    e["passed"] = c.passed;
    if (!c.detail.empty()) e["detail"] = c.detail;
    j["checks"].push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

VerifyReport run_verify(const VerifyOptions& options) {
  VerifyReport report;
  report.mode = options.full ? "full" : "quick";
  report.seed = options.seed;
  const int n_max = options.full ? 12 : 8;
  std::mt19937_64 rng(options.seed);
  Suite suite(report);

  const auto k1 = max_asymptotic(1);
  const auto k2 = max_asymptotic(2);
  suite.add("asymptotic_k1_fidelity", 1e-12, [&](std::string&) { return std::abs(k1.fidelity - 1.0); });
  suite.add("asymptotic_k1_time", 1e-6, [&](std::string& d) {
    d = "tau=" + format_shortest(k1.tau);
    return std::abs(k1.tau - pi / 2);
  });
  suite.add("asymptotic_k2_fidelity", 1e-9, [&](std::string& d) {
    d = "F=" + format_shortest(k2.fidelity);
    return std::abs(k2.fidelity - 8.0 / 9.0);
  });
  suite.add("asymptotic_k2_time", 1e-6, [&](std::string& d) {
    d = "tau=" + format_shortest(k2.tau);
    return std::abs(k2.tau - pi / std::sqrt(6.0));
  });

  suite.add("asymptotic_k3_closed_form_curve", 1e-9, [](std::string&) {
    const AsymptoticEvolution evo(3);
    double err = 0.0;
    for (int i = 0; i <= 20000; ++i) {
      const double tau = 4.0 * pi * i / 20000;
      err = std::max(err, std::abs(evo.fidelity(tau) - closed_form_F3(tau)));
    }
    return err;
  });

  suite.add("constructor_equivalence", 1e-12, [&](std::string& d) {
    double err = 0.0;
    for (int n = 2; n <= n_max; ++n) {
      const auto J = CouplingMatrix::all_to_all(n);
      for (int k = 1; 2 * k <= n; ++k) {
        const auto basis = enumerate_basis(n, k);
        const auto marked = first_sites(k);
        const auto walk = build_walk(basis, J);
        const auto mark = build_mark(basis, marked);
        const auto table = distance_classes(basis, BasisState::from_sites(n, marked));
        for (double g : {0.05, 1.0 / n, n > 2 ? 1.0 / (n - 2) : 0.3}) {
          const auto P = project_onto_classes(build_search(walk, mark, g), table);
          err = std::max(err, (P - build_reduced(n, k, g).dense()).cwiseAbs().maxCoeff());
        }
      }
    }
    d = "2 <= n <= " + std::to_string(n_max);
    return err;
  });

  suite.add("engine_triangle_reduced_sparse", 1e-8, [&](std::string&) {
    double err = 0.0;
    for (int n = 6; n <= n_max; n += 2)
      for (int k = 1; k <= 4 && 2 * k <= n; ++k)
        for (double g : {0.1, 1.0 / n}) err = std::max(err, triangle_error(n, k, g, 20.0, 201));
    return err;
  });

  suite.add("brute_force_oracle_random_couplings", 1e-10, [&](std::string& d) {
    double err = 0.0;
    std::uniform_real_distribution<double> time(0.0, 20.0);
    for (int n = 4; n <= n_max; n += 2) {
      const CouplingMatrix J(random_couplings(n, rng));
      for (int k = 1; k <= std::min(4, n - 1); ++k) {
        const auto marked = first_sites(k);
        const auto basis = enumerate_basis(n, k);
        const auto H = build_search(build_walk(basis, J), build_mark(basis, marked), 0.3);
        const BruteForceEngine engine(n, k, marked, J, 0.3);
        const State psi0 = uniform_state(basis);
        const auto target = static_cast<Eigen::Index>(basis.rank(BasisState::from_sites(n, marked)));
        for (int s = 0; s < 10; ++s) {
          const double t = time(rng);
          const double a = std::norm(propagate(H, psi0, t)(target));
          const double b = std::norm(engine.evolve(psi0, t).sector(target));
          err = std::max(err, std::abs(a - b));
        }
      }
    }
    d = "4 <= n <= " + std::to_string(n_max) + ", 10 random times per (n, k)";
    return err;
  });

  suite.add("full_vs_reduced_gamma_0.1", 1e-8, [&](std::string& d) {
    const int n = options.full ? 10 : 8;
    double err = 0.0;
    for (int k = 1; k <= 4; ++k) err = std::max(err, triangle_error(n, k, 0.1, 20.0, 500));
    d = "n=" + std::to_string(n) + ", k=1..4, 500 times";
    return err;
  });

  suite.add("johnson_graph_degree", 0.0, [&](std::string&) {
    double violations = 0.0;
    for (int n = 2; n <= std::min(n_max, 10); ++n)
      for (int k = 1; k < n; ++k) {
        const auto basis = enumerate_basis(n, k);
        for (std::size_t r = 0; r < basis.size(); ++r)
          if (neighbors(basis, basis.state(r)).size() != static_cast<std::size_t>(k * (n - k)))
            violations += 1.0;
      }
    return violations;
  });

  suite.add("distance_class_partition", 0.0, [](std::string&) {
    double violations = 0.0;
    for (int n = 1; n <= 24; ++n)
      for (int k = 1; k <= n; ++k) {
        std::uint64_t total = 0;
        for (int q = 0; q <= k; ++q) total += class_size(n, k, q);
        if (total != binomial(n, k)) violations += 1.0;
      }
    return violations;
  });

  suite.add("coupon_collector_table", 0.0, [](std::string& d) {
    const std::int64_t expected[] = {1, 8, 15, 21, 28};
    double mismatches = 0.0;
    for (int k = 1; k <= 5; ++k) {
      const auto s = min_trials_s(k, 0.01);
      d += (k > 1 ? "," : "") + std::to_string(s);
      if (s != expected[k - 1]) mismatches += 1.0;
    }
    return mismatches;
  });

  suite.add("krylov_unitarity_and_time_reversal", 1e-8, [&](std::string&) {
    const int n = options.full ? 14 : 10;
    const int k = n / 2 - 1;
    const CouplingMatrix J(random_couplings(n, rng));
    const auto basis = enumerate_basis(n, k);
    const auto H = build_search(build_walk(basis, J), build_mark(basis, first_sites(k)), 1.0 / n);
    PropagatorOptions opts;
    opts.dense_cutoff = 0;
    const State psi = uniform_state(basis);
    double err = 0.0;
    for (double t : {0.7, 5.0, 23.0}) {
      const State out = propagate(H, psi, t, opts);
      err = std::max(err, std::abs(out.norm() - 1.0));
      err = std::max(err, (propagate(H, out, -t, opts) - psi).norm());
    }
    return err;
  });

  suite.add("single_excitation_regression_fidelity", 0.01, [](std::string& d) {
    const auto m = max_fidelity(reduced_config(10000, 1, 1e-4));
    d = "F=" + format_shortest(m.value);
    return 1.0 - m.value;
  });

  suite.add("single_excitation_regression_time", 0.02, [](std::string& d) {
    const auto m = max_fidelity(reduced_config(10000, 1, 1e-4));
    d = "t*=" + format_shortest(m.time);
    return std::abs(m.time / (pi * 50.0) - 1.0);
  });

  suite.add("manifest_replay", 0.0, [&](std::string& d) {
    namespace fs = std::filesystem;
    std::string templ = (fs::temp_directory_path() / "qwsearch-verify-XXXXXX").string();
    require(mkdtemp(templ.data()) != nullptr, ErrorCode::InvalidArgs, "cannot create a scratch directory");
    const fs::path dir(templ);
    const std::vector<std::vector<std::string>> pool = {
        {"fidelity", "--n", "8", "--k", "2", "--gamma", "0.1", "--engine", "both", "--points", "200"},
        {"fidelity", "--n", "8", "--k", "3", "--alpha", "1", "--marked", "1,3,6", "--gamma", "0.15",
         "--engine", "sparse", "--points", "150", "--format", "json"},
        {"fidelity", "--n", "6", "--k", "2", "--optimize-gamma", "auto", "--points", "300"},
        {"asymptotic", "--kmax", "8"},
        {"asymptotic", "--kmax", "5", "--format", "json"},
        {"protocol", "--k-range", "1:3", "--n-range", "50,200"},
    };
    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    double differing = 0.0;
    std::ostringstream sink;
    for (std::size_t i = 0; i < 3; ++i) {
      auto args = pool[order[i]];
      const fs::path original = dir / ("original" + std::to_string(i));
      const fs::path replayed = dir / ("replayed" + std::to_string(i));
      args.push_back("--out");
      args.push_back(original.string());
      require(run(args, sink, sink) == kOk, ErrorCode::InvalidArgs, "producing output failed");
      const auto replay = replay_arguments(read_manifest(original.string()), replayed.string());
      require(run(replay, sink, sink) == kOk, ErrorCode::InvalidArgs, "replay failed");
      if (slurp(original) != slurp(replayed)) differing += 1.0;
      d += (i ? ";" : "") + args[0];
    }
    fs::remove_all(dir);
    return differing;
  });

  return report;
}

}  // namespace qwsearch::cli
