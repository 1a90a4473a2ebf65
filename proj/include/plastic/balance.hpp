#pragma once

// Balance profiles m_w(n), M_w(n), discrepancy series, collaring and the
// Thue-Morse adversarial words.

#include "plastic/symbolic.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace plastic {

struct BalanceRow
{
  std::size_t n = 0;
  std::size_t min = 0;
  std::size_t max = 0;

  std::size_t balance() const { return max - min; }
  bool operator==(const BalanceRow &) const = default;
};

/// Occurrences of a target are counted by start position: an occurrence
/// belongs to a window of length n when it lies entirely inside it.
struct BalanceProfile
{
  Word target;
  std::vector<BalanceRow> rows; // n = |target| .. n_max
  std::size_t observed_constant = 0;
  /// Set when the rows come from the windows of one explicit word rather than
  /// from the full language; min/max are then bounds seen in that word only.
  bool one_sided = false;
};

/// Exact profile over the language of a primitive substitution.
BalanceProfile balance_profile(const Substitution &sub, const Word &target, std::size_t n_max);

/// Profile over the length-n windows of an explicit word.
BalanceProfile balance_profile(WordView source, const Word &target, std::size_t n_max);

/// Profile over the length-n prefixes of an extendable factor set: every
/// length-n factor must be the prefix of some member, which holds for the
/// length-N factors of any subshift, N >= n_max.
BalanceProfile balance_profile_from_factors(const FactorSet &extendable, const Word &target,
                                            std::size_t n_max);

/// B_w(n) sampled at the given n (any order; returned in input order).
std::vector<std::pair<std::size_t, std::size_t>>
word_balance_growth(const Substitution &sub, const Word &target,
                    const std::vector<std::size_t> &n_list);

/// D(N) = count(target, first N letters) - (N - |target| + 1)^+ * frequency.
struct DiscrepancySeries
{
  Word target;
  double frequency = 0.0;
  std::vector<double> values; // N = 0 .. |prefix|
  double sup_abs = 0.0;
};

DiscrepancySeries discrepancy_series(WordView prefix, const Word &target, double frequency);

/// Letters of the collared alphabet are the factors of length 2r+1; the
/// collared letter at position k records the window [k-r, k+r].
struct CollaredRecoding
{
  std::size_t radius = 0;
  FactorSet blocks;
  Alphabet alphabet;

  Letter letter_of(WordView block) const;
};

CollaredRecoding collar(const Substitution &sub, std::size_t radius);

/// Maps a word of length n+2r to its collared word of length n.
Word recode(const CollaredRecoding &rec, WordView w);

/// Length-n factors of the collared language: recodings of factors(n + 2r).
FactorSet collared_factors(const Substitution &sub, const CollaredRecoding &rec, std::size_t n);

/// Letter profile of every collared letter over collared factors, n <= n_max.
std::vector<BalanceProfile> collared_profiles(const Substitution &sub,
                                              const CollaredRecoding &rec, std::size_t n_max);

enum class BalanceTrend
{
  BoundedObserved,
  GrowthObserved,
};

const char *to_string(BalanceTrend t);

/// Growth heuristic over a profile. Let R(n) be the running maximum of B.
/// GrowthObserved when R increases at least twice for n in (sqrt(n_max), n_max];
/// fitted_slope is the least-squares slope of R against log2 n over that range.
struct GrowthAssessment
{
  BalanceTrend trend = BalanceTrend::BoundedObserved;
  std::size_t early_max = 0;
  std::size_t final_max = 0;
  int late_increments = 0;
  double fitted_slope = 0.0;
};

GrowthAssessment assess_growth(const BalanceProfile &profile);

struct TargetEvidence
{
  BalanceProfile profile;
  GrowthAssessment growth;
};

/// Letter profiles for every letter and word profiles for every factor of
/// length 2..word_length, all over n <= n_max.
struct BalanceEvidence
{
  std::size_t n_max = 0;
  std::size_t word_length = 0;
  std::vector<TargetEvidence> letters;
  std::vector<TargetEvidence> words;
};

BalanceEvidence balance_evidence(const Substitution &sub, std::size_t n_max,
                                 std::size_t word_length);

/// phi^{2m}(a) phi^{2m-2}(b) phi^{2m-4}(a) ... phi^0(.), verified to be a
/// Thue-Morse factor.
Word tm_adversarial_word(unsigned m);

struct AdversaryCount
{
  std::size_t length = 0;
  std::size_t alternating_pairs = 0; // occurrences of ab plus ba
  double expected_pairs = 0.0;       // 2/3 of the length-2 positions
  double excess = 0.0;
};

AdversaryCount tm_adversary_count(unsigned m);

} // namespace plastic
