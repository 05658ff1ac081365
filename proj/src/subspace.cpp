#include "qwsearch/subspace.hpp"

#include <algorithm>
#include <array>
#include <bit>

#include "qwsearch/error.hpp"

namespace qwsearch {

namespace {

using BinomialTable = std::array<std::array<std::uint64_t, kMaxSpins + 1>, kMaxSpins + 1>;

constexpr BinomialTable make_binomial_table() {
  BinomialTable t{};
  for (int n = 0; n <= kMaxSpins; ++n) {
    t[n][0] = 1;
    for (int k = 1; k <= n; ++k) t[n][k] = t[n - 1][k - 1] + (k < n ? t[n - 1][k] : 0);
  }
  return t;
}

constexpr BinomialTable kBinomial = make_binomial_table();

std::uint64_t low_mask(int n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

// Gosper's hack: next larger word with the same popcount.
std::uint64_t next_combination(std::uint64_t x) {
  const std::uint64_t c = x & (~x + 1);
  const std::uint64_t r = x + c;
  return (((r ^ x) >> 2) / c) | r;
}

}  // namespace

BasisState BasisState::from_string(std::string_view bits) {
  require(!bits.empty() && bits.size() <= kMaxSpins, ErrorCode::InvalidArgs,
          "bit string length must be in 1..64");
  BasisState s;
  s.n = static_cast<int>(bits.size());
  for (int i = 0; i < s.n; ++i) {
    const char c = bits[i];
    require(c == '0' || c == '1', ErrorCode::InvalidArgs, "bit string must contain only 0/1");
    if (c == '1') s.word |= std::uint64_t{1} << i;
  }
  return s;
}

BasisState BasisState::from_sites(int n, std::span<const int> sites) {
  require(n >= 1 && n <= kMaxSpins, ErrorCode::InvalidArgs, "n must be in 1..64");
  BasisState s;
  s.n = n;
  for (int site : sites) {
    require(site >= 1 && site <= n, ErrorCode::InvalidArgs,
            "site " + std::to_string(site) + " outside 1.." + std::to_string(n));
    const std::uint64_t bit = std::uint64_t{1} << (site - 1);
    require(!(s.word & bit), ErrorCode::InvalidArgs, "duplicate site " + std::to_string(site));
    s.word |= bit;
  }
  return s;
}

int BasisState::popcount() const noexcept { return std::popcount(word); }

std::vector<int> BasisState::sites() const {
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (occupied(i)) out.push_back(i + 1);
  return out;
}

std::string BasisState::to_string() const {
  std::string out(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i)
    if (occupied(i)) out[static_cast<std::size_t>(i)] = '1';
  return out;
}

std::uint64_t binomial(int n, int k) {
  require(n >= 0 && n <= kMaxSpins, ErrorCode::InvalidArgs, "binomial: n must be in 0..64");
  if (k < 0 || k > n) return 0;
  return kBinomial[n][k];
}

int hamming_distance(const BasisState& a, const BasisState& b) {
  require(a.n == b.n, ErrorCode::LengthMismatch,
          "strings of length " + std::to_string(a.n) + " and " + std::to_string(b.n));
  return std::popcount(a.word ^ b.word);
}

SubspaceBasis enumerate_basis(int n, int k, const BasisOptions& options) {
  require(n >= 1, ErrorCode::InvalidArgs, "n must be positive");
  require(n <= kMaxSpins, ErrorCode::InvalidArgs, "n > 64 is not supported");
  require(k >= 0 && k <= n, ErrorCode::InvalidArgs, "k must lie in 0..n");
  const std::uint64_t count = binomial(n, k);
  require(count <= options.max_states, ErrorCode::CapacityExceeded,
          "C(" + std::to_string(n) + "," + std::to_string(k) + ") = " + std::to_string(count) +
              " exceeds the cap of " + std::to_string(options.max_states));

  std::vector<std::uint64_t> words;
  words.reserve(count);
  if (k == 0) {
    words.push_back(0);
  } else {
    std::uint64_t x = low_mask(k);
    for (std::uint64_t i = 0; i < count; ++i) {
      words.push_back(x);
      if (i + 1 < count) x = next_combination(x);
    }
  }
  return SubspaceBasis(n, k, std::move(words));
}

std::size_t SubspaceBasis::combinadic_rank(std::uint64_t word) const noexcept {
  std::size_t r = 0;
  int i = 1;
  while (word) {
    const int p = std::countr_zero(word);
    r += kBinomial[p][i];
    ++i;
    word &= word - 1;
  }
  return r;
}

BasisState SubspaceBasis::state(std::size_t rank) const {
  require(rank < words_.size(), ErrorCode::InvalidArgs, "rank out of range");
  return BasisState{words_[rank], n_};
}

bool SubspaceBasis::contains(const BasisState& s) const noexcept {
  return s.n == n_ && std::popcount(s.word) == k_ && (s.word & ~low_mask(n_)) == 0;
}

std::size_t SubspaceBasis::rank(const BasisState& s) const {
  require(contains(s), ErrorCode::NotInBasis,
          s.to_string() + " is not in the (n=" + std::to_string(n_) + ", k=" +
              std::to_string(k_) + ") basis");
  return combinadic_rank(s.word);
}

std::uint64_t class_size(int n, int k, int q) {
  return binomial(k, q) * binomial(n - k, q);
}

DistanceClassTable distance_classes(const SubspaceBasis& basis, const BasisState& w) {
  require(basis.contains(w), ErrorCode::NotInBasis, "marked string not in basis");
  const int k = basis.k();
  DistanceClassTable table;
  table.w = w;
  table.classes.resize(static_cast<std::size_t>(k) + 1);
  const auto words = basis.words();
  for (std::size_t r = 0; r < words.size(); ++r) {
    const int q = std::popcount(words[r] ^ w.word) / 2;
    table.classes[static_cast<std::size_t>(q)].push_back(r);
  }
  for (const auto& c : table.classes) table.sizes.push_back(c.size());
  return table;
}

std::uint64_t intersection_count(int n, int k, int i, int j) {
  require(k >= 0 && k <= n, ErrorCode::InvalidArgs, "k must lie in 0..n");
  require(i >= 1 && i <= k + 1 && j >= 1 && j <= k + 1, ErrorCode::InvalidArgs,
          "class labels must lie in 1..k+1");
  const auto q = static_cast<std::uint64_t>(i - 1);
  const auto uk = static_cast<std::uint64_t>(k);
  const auto un = static_cast<std::uint64_t>(n);
  if (i == j) return q * (un - 2 * q);
  if (j == i + 1) return (uk - q) * (un - uk - q);
  // One step back towards w: a marked site refilled from an unmarked one.
  if (j == i - 1) return q * q;
  return 0;
}

std::vector<std::size_t> neighbors(const SubspaceBasis& basis, const BasisState& a) {
  require(basis.contains(a), ErrorCode::NotInBasis, a.to_string() + " not in basis");
  std::vector<std::size_t> out;
  out.reserve(static_cast<std::size_t>(basis.k()) * static_cast<std::size_t>(basis.n() - basis.k()));
  const std::uint64_t holes = ~a.word & low_mask(a.n);
  for (std::uint64_t occ = a.word; occ; occ &= occ - 1) {
    const std::uint64_t from = occ & (~occ + 1);
    for (std::uint64_t emp = holes; emp; emp &= emp - 1) {
      const std::uint64_t to = emp & (~emp + 1);
      out.push_back(basis.rank(BasisState{a.word ^ from ^ to, a.n}));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace qwsearch
