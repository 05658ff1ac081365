#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "oracles.hpp"
#include "qwsearch/error.hpp"
#include "qwsearch/subspace.hpp"

using namespace qwsearch;

TEST_CASE("basis state string convention") {
  const auto s = BasisState::from_string("1100");
  CHECK(s.n == 4);
  CHECK(s.word == 0b0011u);
  CHECK(s.sites() == std::vector<int>{1, 2});
  CHECK(s.to_string() == "1100");
  const int sites[] = {2, 4};
  CHECK(BasisState::from_sites(4, sites).to_string() == "0101");
  CHECK_THROWS_AS(BasisState::from_string("10a1"), Error);
}

TEST_CASE("hamming distance") {
  CHECK(hamming_distance(BasisState::from_string("110000"), BasisState::from_string("001100")) == 4);
  CHECK(hamming_distance(BasisState::from_string("1010"), BasisState::from_string("1010")) == 0);
  try {
    hamming_distance(BasisState::from_string("10"), BasisState::from_string("100"));
    FAIL("expected LengthMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LengthMismatch);
  }
}

TEST_CASE("enumeration matches a full scan") {
  for (int n = 1; n <= 12; ++n)
    for (int k = 0; k <= n; ++k) {
      const auto basis = enumerate_basis(n, k);
      const auto expected = oracle::weight_k_words(n, k);
      REQUIRE(basis.size() == expected.size());
      CHECK(std::equal(basis.words().begin(), basis.words().end(), expected.begin()));
      CHECK(basis.size() == binomial(n, k));
    }
}

TEST_CASE("canonical order for n=4, k=2") {
  const auto basis = enumerate_basis(4, 2);
  const std::vector<std::uint64_t> words(basis.words().begin(), basis.words().end());
  CHECK(words == std::vector<std::uint64_t>{3, 5, 6, 9, 10, 12});
  CHECK(basis.state(0).to_string() == "1100");
  CHECK(basis.state(5).to_string() == "0011");
}

TEST_CASE("rank and unrank are inverse") {
  for (int n : {5, 9, 14})
    for (int k : {1, 2, n / 2, n - 1}) {
      const auto basis = enumerate_basis(n, k);
      for (std::size_t r = 0; r < basis.size(); ++r) {
        const auto s = basis.state(r);
        REQUIRE(basis.rank(s) == r);
        REQUIRE(basis.contains(s));
      }
    }
  const auto basis = enumerate_basis(6, 2);
  CHECK_FALSE(basis.contains(BasisState::from_string("111000")));
  CHECK_THROWS_AS(basis.rank(BasisState::from_string("111000")), Error);
}

TEST_CASE("enumeration rejects bad input") {
  CHECK_THROWS_AS(enumerate_basis(65, 1), Error);
  CHECK_THROWS_AS(enumerate_basis(5, 6), Error);
  CHECK_THROWS_AS(enumerate_basis(5, -1), Error);
  try {
    enumerate_basis(20, 10, BasisOptions{1000});
    FAIL("expected CapacityExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CapacityExceeded);
  }
}

TEST_CASE("class sizes partition the sector") {
  for (int n = 1; n <= 24; ++n)
    for (int k = 1; k <= n; ++k) {
      std::uint64_t total = 0;
      for (int q = 0; q <= k; ++q) total += class_size(n, k, q);
      REQUIRE(total == binomial(n, k));
    }
}

TEST_CASE("distance classes agree with Hamming distance") {
  for (int n = 2; n <= 10; ++n)
    for (int k = 1; k <= std::min(n, 4); ++k) {
      const auto basis = enumerate_basis(n, k);
      const auto w = basis.state(basis.size() / 3);
      const auto table = distance_classes(basis, w);
      REQUIRE(table.classes.size() == static_cast<std::size_t>(k) + 1);
      std::size_t seen = 0;
      for (int q = 0; q <= k; ++q) {
        CHECK(table.classes[q].size() == table.sizes[q]);
        CHECK(table.sizes[q] == class_size(n, k, q));
        for (auto r : table.classes[q]) CHECK(hamming_distance(basis.state(r), w) == 2 * q);
        seen += table.classes[q].size();
      }
      CHECK(seen == basis.size());
    }
}

TEST_CASE("state graph is the Johnson graph") {
  for (int n = 2; n <= 10; ++n)
    for (int k = 1; k <= std::min(5, n - 1); ++k) {
      const auto words = oracle::weight_k_words(n, k);
      const auto A = oracle::johnson_adjacency(words);
      const auto basis = enumerate_basis(n, k);
      int diameter = 0;
      for (Eigen::Index a = 0; a < A.rows(); ++a) {
        const auto nb = neighbors(basis, basis.state(static_cast<std::size_t>(a)));
        REQUIRE(static_cast<int>(nb.size()) == k * (n - k));
        for (auto b : nb) REQUIRE(A(a, static_cast<Eigen::Index>(b)) == 1.0);
        if (a < 3) {
          const auto dist = oracle::bfs(A, a);
          for (Eigen::Index b = 0; b < A.rows(); ++b)
            REQUIRE(2 * dist[b] == std::popcount(words[a] ^ words[b]));
          diameter = std::max(diameter, *std::max_element(dist.begin(), dist.end()));
        }
      }
      CHECK(diameter == std::min(k, n - k));
    }
}

TEST_CASE("neighbour examples") {
  const auto b63 = enumerate_basis(6, 3);
  for (std::size_t r = 0; r < b63.size(); ++r) CHECK(neighbors(b63, b63.state(r)).size() == 9);
  const auto b42 = enumerate_basis(4, 2);
  CHECK(neighbors(b42, BasisState::from_string("0011")).size() == 4);
}

TEST_CASE("intersection counts match brute force on every member of a class") {
  for (int n = 2; n <= 10; ++n)
    for (int k = 1; k <= std::min(4, n / 2); ++k) {
      const auto basis = enumerate_basis(n, k);
      const auto w = basis.state(0);
      const auto table = distance_classes(basis, w);
      for (int i = 1; i <= k + 1; ++i)
        for (int j = 1; j <= k + 1; ++j) {
          const auto expected = intersection_count(n, k, i, j);
          for (auto a : table.classes[i - 1]) {
            std::uint64_t count = 0;
            for (auto b : table.classes[j - 1])
              if (std::popcount(basis.words()[a] ^ basis.words()[b]) == 2) ++count;
            REQUIRE(count == expected);
          }
        }
    }
}
