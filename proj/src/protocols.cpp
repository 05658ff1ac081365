#include "qwsearch/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <span>

#include "qwsearch/error.hpp"

namespace qwsearch {

namespace {

// Beyond this inclusion-exclusion loses everything to cancellation.
constexpr int kInclusionExclusionMaxK = 30;
constexpr std::int64_t kMaxTrials = 10'000'000;

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 2) return v.empty() ? 0.0 : (v.size() == 1 ? v[0] : v[0] + v[1]);
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double inclusion_exclusion_tail(int k, std::int64_t s) {
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(k));
  double binom = 1.0;
  for (int i = 1; i <= k; ++i) {
    binom = binom * (k - i + 1) / i;
    const double base = static_cast<double>(k - i) / k;
    const double term = binom * std::pow(base, static_cast<double>(s));
    terms.push_back(i % 2 == 1 ? term : -term);
  }
  std::sort(terms.begin(), terms.end(),
            [](double a, double b) { return std::abs(a) > std::abs(b); });
  return std::clamp(pairwise_sum(terms), 0.0, 1.0);
}

// Distribution of the number of distinct sites seen after each draw.
class OccupancyChain {
 public:
  explicit OccupancyChain(int k) : k_(k), p_(static_cast<std::size_t>(k) + 1, 0.0) { p_[0] = 1.0; }

  void step() {
    for (int j = k_; j >= 1; --j)
      p_[j] = p_[j] * j / k_ + p_[j - 1] * (k_ - j + 1) / k_;
    p_[0] = 0.0;
  }

  // Mass on "some site still missing"; summed directly, no 1 - p_k.
  double tail() const {
    double sum = 0.0;
    for (int j = 0; j < k_; ++j) sum += p_[j];
    return std::clamp(sum, 0.0, 1.0);
  }

 private:
  int k_;
  std::vector<double> p_;
};

}  // namespace

double expected_trials(int k) {
  require(k >= 1, ErrorCode::InvalidArgs, "k must be positive");
  double h = 0.0;
  for (int i = k; i >= 1; --i) h += 1.0 / i;
  return k * h;
}

double expected_trials_asymptotic(int k) {
  require(k >= 1, ErrorCode::InvalidArgs, "k must be positive");
  return k * std::log(static_cast<double>(k)) + kEulerMascheroni * k + 0.5;
}

double coverage_tail(int k, std::int64_t s) {
  require(k >= 1, ErrorCode::InvalidArgs, "k must be positive");
  require(s >= 0, ErrorCode::InvalidArgs, "s must be non-negative");
  if (s < k) return 1.0;
  if (k <= kInclusionExclusionMaxK) return inclusion_exclusion_tail(k, s);
  OccupancyChain chain(k);
  for (std::int64_t i = 0; i < s; ++i) chain.step();
  return chain.tail();
}

std::int64_t min_trials_s(int k, double epsilon_s) {
  require(k >= 1, ErrorCode::InvalidArgs, "k must be positive");
  require(epsilon_s > 0.0 && epsilon_s < 1.0, ErrorCode::InvalidArgs, "epsilon_s must lie in (0,1)");
  if (k <= kInclusionExclusionMaxK) {
    for (std::int64_t s = k; s <= kMaxTrials; ++s)
      if (coverage_tail(k, s) < epsilon_s) return s;
  } else {
    OccupancyChain chain(k);
    for (std::int64_t s = 1; s <= kMaxTrials; ++s) {
      chain.step();
      if (chain.tail() < epsilon_s) return s;
    }
  }
  throw Error(ErrorCode::Diverges, "coverage target not reached within the trial cap");
}

double repeat_failure(double fidelity, std::int64_t r) {
  require(fidelity >= 0.0 && fidelity <= 1.0, ErrorCode::InvalidArgs, "fidelity must lie in [0,1]");
  require(r >= 1, ErrorCode::InvalidArgs, "r must be positive");
  const double miss = 1.0 - fidelity;
  const auto rd = static_cast<double>(r);
  return std::pow(miss, rd) + rd * fidelity * std::pow(miss, rd - 1.0);
}

std::int64_t min_repeats_r(double fidelity, double epsilon_r) {
  require(fidelity > 0.0 && fidelity <= 1.0, ErrorCode::InvalidArgs, "fidelity must lie in (0,1]");
  require(epsilon_r > 0.0 && epsilon_r < 1.0, ErrorCode::InvalidArgs, "epsilon_r must lie in (0,1)");
  for (std::int64_t r = 1; r <= kMaxRepeats; ++r)
    if (repeat_failure(fidelity, r) < epsilon_r) return r;
  throw Error(ErrorCode::Diverges,
              "fidelity " + format_shortest(fidelity) + " needs more than " +
                  std::to_string(kMaxRepeats) + " repetitions");
}

ProtocolComparison protocol_times(double n, int k, double epsilon_s, double epsilon_r,
                                  double F_single, double t_single, double F_ksub,
                                  double t_ksub) {
  require(n >= 1.0 && std::isfinite(n), ErrorCode::InvalidArgs, "n must be positive");
  require(k >= 1 && k <= n, ErrorCode::InvalidArgs, "k must lie in 1..n");
  require(t_single > 0.0 && t_ksub > 0.0 && std::isfinite(t_single) && std::isfinite(t_ksub),
          ErrorCode::InvalidArgs, "search times must be positive");
  ProtocolComparison c;
  c.k = k;
  c.n = n;
  c.epsilon_s = epsilon_s;
  c.epsilon_r = epsilon_r;
  c.F_single = F_single;
  c.F_ksub = F_ksub;
  c.s_k = min_trials_s(k, epsilon_s);
  c.r_single = min_repeats_r(F_single, epsilon_r);
  c.r_ksub = min_repeats_r(F_ksub, epsilon_r);
  c.t_1subspace = static_cast<double>(c.s_k * c.r_single) * t_single;
  c.t_ksubspace = static_cast<double>(c.r_ksub) * t_ksub;
  c.ratio = c.t_1subspace / c.t_ksubspace;
  return c;
}

void write_protocol_csv(std::ostream& os, const std::vector<ProtocolComparison>& rows,
                        const Manifest& manifest) {
  os << manifest.to_comment_block();
  os << "k,n,N_k,s_k,r_k,t_1subspace,t_ksubspace,ratio\n";
  for (const auto& row : rows) {
    double states = 1.0;
    for (int i = 0; i < row.k; ++i) states = states * (row.n - i) / (i + 1);
    os << row.k << ',' << format_shortest(row.n) << ',' << format_shortest(std::round(states))
       << ',' << row.s_k << ',' << row.r_ksub << ',' << format_shortest(row.t_1subspace) << ','
       << format_shortest(row.t_ksubspace) << ',' << format_shortest(row.ratio) << '\n';
  }
}

}  // namespace qwsearch
