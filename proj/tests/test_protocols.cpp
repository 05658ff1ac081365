#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "qwsearch/error.hpp"
#include "qwsearch/protocols.hpp"

using namespace qwsearch;

namespace {

// P(X <= 1) for X ~ Binomial(r, F), by direct summation of the pmf.
double binomial_at_most_one(double F, std::int64_t r) {
  const double p0 = std::pow(1.0 - F, static_cast<double>(r));
  const double p1 = static_cast<double>(r) * F * std::pow(1.0 - F, static_cast<double>(r - 1));
  return p0 + p1;
}

}  // namespace

TEST_CASE("expected trials") {
  CHECK(expected_trials(1) == 1.0);
  CHECK(expected_trials(3) == doctest::Approx(5.5));
  CHECK(std::abs(expected_trials(100) - expected_trials_asymptotic(100)) < 0.01);
  CHECK_THROWS_AS(expected_trials(0), Error);
}

TEST_CASE("coverage tail values") {
  CHECK(coverage_tail(1, 1) == 0.0);
  CHECK(coverage_tail(1, 0) == 1.0);
  CHECK(coverage_tail(2, 1) == 1.0);
  CHECK(coverage_tail(2, 8) < 0.01);
  CHECK(coverage_tail(2, 7) >= 0.01);
  CHECK(coverage_tail(2, 5) == doctest::Approx(2.0 * std::pow(0.5, 5)));
  for (int k = 1; k <= 60; k += 7) {
    double prev = 1.0;
    for (std::int64_t s = 0; s <= 6 * k + 20; ++s) {
      const double v = coverage_tail(k, s);
      REQUIRE(v >= 0.0);
      REQUIRE(v <= prev + 1e-15);
      prev = v;
    }
  }
}

TEST_CASE("coverage tail against the exact occupancy distribution") {
  for (int k : {3, 12, 30, 31, 45, 80}) {
    // p[j]: probability of having seen exactly j distinct sites.
    std::vector<long double> p(static_cast<std::size_t>(k) + 1, 0.0L);
    p[0] = 1.0L;
    for (std::int64_t s = 1; s <= 12 * k; ++s) {
      std::vector<long double> next(p.size(), 0.0L);
      for (int j = 0; j <= k; ++j) {
        if (j > 0) next[j] += p[j - 1] * static_cast<long double>(k - j + 1) / k;
        next[j] += p[j] * static_cast<long double>(j) / k;
      }
      p = std::move(next);
      long double missing = 0.0L;
      for (int j = 0; j < k; ++j) missing += p[j];
      const double tail = coverage_tail(k, s);
      REQUIRE(std::abs(tail - static_cast<double>(missing)) < 1e-12 + 1e-9 * static_cast<double>(missing));
    }
  }
}

TEST_CASE("minimal trial counts") {
  const std::int64_t expected[] = {1, 8, 15, 21, 28};
  for (int k = 1; k <= 5; ++k) CHECK(min_trials_s(k, 0.01) == expected[k - 1]);
  for (double eps : {0.1, 0.005, 1e-4}) {
    std::int64_t prev = 0;
    for (int k = 1; k <= 45; ++k) {
      const auto s = min_trials_s(k, eps);
      REQUIRE(s >= k);
      REQUIRE(s >= prev);
      REQUIRE(coverage_tail(k, s) < eps);
      if (s > k) REQUIRE(coverage_tail(k, s - 1) >= eps);
      prev = s;
    }
  }
  CHECK_THROWS_AS(min_trials_s(3, 0.0), Error);
  CHECK_THROWS_AS(min_trials_s(3, 1.0), Error);
}

TEST_CASE("coverage tail against Monte Carlo") {
  std::mt19937_64 rng(2024);
  constexpr int kSamples = 1'000'000;
  for (int k = 1; k <= 6; ++k) {
    std::vector<std::int64_t> hist(64, 0);
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < kSamples; ++i) {
      const auto d = oracle::draws_to_collect(k, rng);
      sum += static_cast<double>(d);
      sum2 += static_cast<double>(d) * static_cast<double>(d);
      ++hist[static_cast<std::size_t>(std::min<std::int64_t>(d, 63))];
    }
    const double mean = sum / kSamples;
    const double var = sum2 / kSamples - mean * mean;
    CHECK(std::abs(mean - expected_trials(k)) <= 3.0 * std::sqrt(var / kSamples) + 1e-12);
    std::int64_t at_most = 0;
    for (int s = 0; s <= 40; ++s) {
      at_most += hist[static_cast<std::size_t>(s)];
      const double p = coverage_tail(k, s);
      const double est = 1.0 - static_cast<double>(at_most) / kSamples;
      const double sigma = std::sqrt(std::max(p * (1.0 - p), 1e-12) / kSamples);
      REQUIRE(std::abs(est - p) <= 3.0 * sigma + 1e-9);
    }
  }
}

TEST_CASE("repetition counts") {
  CHECK(min_repeats_r(1.0, 0.005) == 2);
  CHECK(min_repeats_r(1.0, 0.5) == 2);
  for (double F : {0.05, 0.3, 0.5, 8.0 / 9.0, 0.97})
    for (double eps : {0.1, 0.01, 0.005}) {
      std::int64_t r = 1;
      while (binomial_at_most_one(F, r) >= eps) ++r;
      REQUIRE(min_repeats_r(F, eps) == r);
      REQUIRE(repeat_failure(F, r) == doctest::Approx(binomial_at_most_one(F, r)));
    }
  CHECK_THROWS_AS(min_repeats_r(1e-9, 1e-3), Error);
  try {
    min_repeats_r(1e-9, 1e-3);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Diverges);
  }
  CHECK_THROWS_AS(min_repeats_r(0.0, 0.1), Error);
}

TEST_CASE("repetition count against Monte Carlo") {
  // Failure of the r chosen for F = 8/9: fewer than two successes in r trials.
  const double F = 8.0 / 9.0;
  const auto r = min_repeats_r(F, 0.005);
  std::mt19937_64 rng(99);
  std::bernoulli_distribution hit(F);
  constexpr int kSamples = 1'000'000;
  for (auto rr : {r - 1, r}) {
    int failures = 0;
    for (int i = 0; i < kSamples; ++i) {
      int successes = 0;
      for (std::int64_t j = 0; j < rr && successes < 2; ++j) successes += hit(rng);
      failures += successes < 2;
    }
    const double p = repeat_failure(F, rr);
    const double est = static_cast<double>(failures) / kSamples;
    CHECK(std::abs(est - p) <= 3.0 * std::sqrt(p * (1 - p) / kSamples));
  }
  CHECK(repeat_failure(F, r - 1) >= 0.005);
}

TEST_CASE("protocol comparison") {
  const double n = 1e4;
  const double t1 = std::numbers::pi * 50.0;
  const auto one = protocol_times(n, 1, 0.005, 0.005, 0.999, t1, 0.999, t1);
  CHECK(one.s_k == 1);
  CHECK(one.ratio == doctest::Approx(1.0));
  const auto c = protocol_times(n, 3, 0.005, 0.005, 0.999, t1, 0.80, 114.0);
  CHECK(c.s_k >= 3);
  CHECK(c.r_ksub >= 2);
  CHECK(c.ratio == doctest::Approx(c.t_1subspace / c.t_ksubspace));
  CHECK(c.t_1subspace == doctest::Approx(static_cast<double>(c.s_k * c.r_single) * t1));

  Manifest m;
  m.set("command", std::string("protocol"));
  std::ostringstream os;
  write_protocol_csv(os, {one, c}, m);
  const std::string text = os.str();
  CHECK(text.rfind("# command=protocol\nk,n,N_k,s_k,r_k,t_1subspace,t_ksubspace,ratio\n1,10000,10000,1,", 0) == 0);
  CHECK(text.find("\n3,10000,166616670000,") != std::string::npos);
  CHECK_THROWS_AS(protocol_times(n, 2, 0.005, 0.005, 0.9, -1.0, 0.9, 1.0), Error);
}
