#pragma once

// Fixed-excitation subspaces of n spins: basis enumeration, ranking,
// Hamming distances and the distance classes around a marked string.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qwsearch {

inline constexpr int kMaxSpins = 64;

/// One spin configuration. Spin i (1-based) is stored at bit i-1 of `word`.
/// The text form lists spin 1 first, so "1100" has excitations on spins 1, 2.
struct BasisState {
  std::uint64_t word = 0;
  int n = 0;

  static BasisState from_string(std::string_view bits);
  /// Builds the string with 1s exactly on `sites` (1-based spin labels).
  static BasisState from_sites(int n, std::span<const int> sites);

  bool occupied(int spin) const noexcept { return (word >> spin) & 1u; }  // 0-based
  int popcount() const noexcept;
  std::vector<int> sites() const;  // 1-based, ascending
  std::string to_string() const;

  friend auto operator<=>(const BasisState&, const BasisState&) = default;
};

/// Exact binomial coefficient for n <= 64 (fits in 64 bits).
std::uint64_t binomial(int n, int k);

int hamming_distance(const BasisState& a, const BasisState& b);

struct BasisOptions {
  std::size_t max_states = 5'000'000;
};

/// All weight-k strings of n spins in colexicographic order of their bit
/// sets, i.e. ascending packed word. Rank is the combinadic
/// sum over occupied positions p_1 < ... < p_k of C(p_i, i).
class SubspaceBasis {
 public:
  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }
  std::size_t size() const noexcept { return words_.size(); }

  BasisState state(std::size_t rank) const;
  std::size_t rank(const BasisState& s) const;  // throws NotInBasis
  bool contains(const BasisState& s) const noexcept;
  std::span<const std::uint64_t> words() const noexcept { return words_; }

 private:
  friend SubspaceBasis enumerate_basis(int, int, const BasisOptions&);
  SubspaceBasis(int n, int k, std::vector<std::uint64_t> words)
      : n_(n), k_(k), words_(std::move(words)) {}

  std::size_t combinadic_rank(std::uint64_t word) const noexcept;

  int n_;
  int k_;
  std::vector<std::uint64_t> words_;
};

SubspaceBasis enumerate_basis(int n, int k, const BasisOptions& options = {});

/// Partition of a basis by graph distance q = hamming/2 from `w`.
struct DistanceClassTable {
  BasisState w;
  std::vector<std::vector<std::size_t>> classes;  // classes[q] = ranks
  std::vector<std::uint64_t> sizes;               // d_{k,q} = C(k,q) C(n-k,q)
};

DistanceClassTable distance_classes(const SubspaceBasis& basis, const BasisState& w);

/// Closed-form d_{k,q}.
std::uint64_t class_size(int n, int k, int q);

/// Number of neighbours that a string in class i-1 has inside class j-1
/// (1-based class labels as in the reduced matrix). The same for every
/// string of the class by vertex transitivity.
std::uint64_t intersection_count(int n, int k, int i, int j);

/// Ranks of all strings one excitation hop away from `a`, ascending.
std::vector<std::size_t> neighbors(const SubspaceBasis& basis, const BasisState& a);

}  // namespace qwsearch
