#pragma once

// Repeated single-excitation search versus one k-excitation search:
// coupon-collector coverage and repetition counts.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "qwsearch/format.hpp"

namespace qwsearch {

inline constexpr double kEulerMascheroni = 0.57721566490153286061;

/// E[T] = k H_k for collecting all k marked sites.
double expected_trials(int k);
/// k log k + gamma_EM k + 1/2.
double expected_trials_asymptotic(int k);

/// P(T > s): probability that s uniform draws over k sites miss at least one.
double coverage_tail(int k, std::int64_t s);

/// Least s with coverage_tail(k, s) < epsilon_s.
std::int64_t min_trials_s(int k, double epsilon_s);

/// (1-F)^r + r F (1-F)^(r-1), the probability of fewer than two successes.
double repeat_failure(double fidelity, std::int64_t r);

inline constexpr std::int64_t kMaxRepeats = 1'000'000;

/// Least r with repeat_failure(F, r) < epsilon_r. Throws Diverges past
/// kMaxRepeats.
std::int64_t min_repeats_r(double fidelity, double epsilon_r);

struct ProtocolComparison {
  int k = 0;
  double n = 0.0;
  double epsilon_s = 0.0;
  double epsilon_r = 0.0;
  std::int64_t s_k = 0;
  std::int64_t r_single = 0;  // repetitions of each single-excitation search
  std::int64_t r_ksub = 0;    // repetitions of the k-excitation search
  double F_single = 0.0;
  double F_ksub = 0.0;
  double t_1subspace = 0.0;
  double t_ksubspace = 0.0;
  double ratio = 0.0;
};

/// t_1subspace = s_k r^(1) t_single and t_ksubspace = r^(k) t_ksub, where
/// t_single is the single-excitation search time (pi sqrt(n) / 2 for the
/// standard protocol) and t_ksub the k-excitation argmax time.
ProtocolComparison protocol_times(double n, int k, double epsilon_s, double epsilon_r,
                                  double F_single, double t_single, double F_ksub, double t_ksub);

/// Columns k,n,N_k,s_k,r_k,t_1subspace,t_ksubspace,ratio; r_k is the
/// k-excitation repetition count. N_k is C(n, k) as a real number.
void write_protocol_csv(std::ostream& os, const std::vector<ProtocolComparison>& rows,
                        const Manifest& manifest);

}  // namespace qwsearch
