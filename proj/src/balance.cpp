#include "plastic/balance.hpp"

#include "plastic/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace plastic {

namespace {

bool occurs_at(WordView u, std::size_t end, WordView w)
{
  // Does w occupy u[end - |w|, end)?
  return end >= w.size() &&
         std::equal(w.begin(), w.end(), u.begin() + static_cast<std::ptrdiff_t>(end - w.size()));
}

void finish(BalanceProfile &p)
{
  p.observed_constant = 0;
  for (auto const &row : p.rows) {
    p.observed_constant = std::max(p.observed_constant, row.balance());
  }
}

void require_target(const Word &target, std::size_t n_max)
{
  if (target.empty()) {
    throw InputError("balance target must be non-empty");
  }
  if (n_max < target.size()) {
    throw InputError("n_max must be at least the target length");
  }
}

} // namespace

BalanceProfile balance_profile_from_factors(const FactorSet &extendable, const Word &target,
                                            std::size_t n_max)
{
  require_target(target, n_max);
  if (extendable.n < n_max) {
    throw InputError("factor set of length " + std::to_string(extendable.n) +
                     " cannot cover windows up to " + std::to_string(n_max));
  }
  auto const L = target.size();
  std::vector<std::size_t> lo(n_max + 1, std::numeric_limits<std::size_t>::max());
  std::vector<std::size_t> hi(n_max + 1, 0);
  for (auto const &v : extendable.factors) {
    std::size_t count = 0;
    for (std::size_t n = L; n <= n_max; ++n) {
      if (occurs_at(v, n, target)) {
        ++count;
      }
      lo[n] = std::min(lo[n], count);
      hi[n] = std::max(hi[n], count);
    }
  }
  if (extendable.factors.empty() || hi[L] == 0) {
    throw InputError("balance target is not a factor of the language");
  }
  BalanceProfile p;
  p.target = target;
  p.rows.reserve(n_max - L + 1);
  for (std::size_t n = L; n <= n_max; ++n) {
    p.rows.push_back({n, lo[n], hi[n]});
  }
  finish(p);
  return p;
}

BalanceProfile balance_profile(const Substitution &sub, const Word &target, std::size_t n_max)
{
  require_target(target, n_max);
  return balance_profile_from_factors(factors(sub, n_max), target, n_max);
}

BalanceProfile balance_profile(WordView source, const Word &target, std::size_t n_max)
{
  require_target(target, n_max);
  if (n_max > source.size()) {
    throw InputError("n_max exceeds the source word length");
  }
  auto const L = target.size();
  // starts[i+1] - starts[j]: occurrences starting in [j, i].
  std::vector<std::size_t> starts(source.size() + 1, 0);
  for (std::size_t p = 0; p < source.size(); ++p) {
    starts[p + 1] = starts[p] + (p + L <= source.size() && occurs_at(source, p + L, target) ? 1 : 0);
  }
  if (starts.back() == 0) {
    throw InputError("balance target does not occur in the source word");
  }
  BalanceProfile p;
  p.target = target;
  p.one_sided = true;
  for (std::size_t n = L; n <= n_max; ++n) {
    std::size_t lo = std::numeric_limits<std::size_t>::max(), hi = 0;
    std::size_t const span = n - L + 1;
    for (std::size_t i = 0; i + n <= source.size(); ++i) {
      std::size_t c = starts[i + span] - starts[i];
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    p.rows.push_back({n, lo, hi});
  }
  finish(p);
  return p;
}

std::vector<std::pair<std::size_t, std::size_t>>
word_balance_growth(const Substitution &sub, const Word &target,
                    const std::vector<std::size_t> &n_list)
{
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (n_list.empty()) {
    return out;
  }
  std::size_t const top = *std::max_element(n_list.begin(), n_list.end());
  for (auto n : n_list) {
    if (n < target.size()) {
      throw InputError("sample length " + std::to_string(n) + " is shorter than the target");
    }
  }
  auto profile = balance_profile(sub, target, top);
  for (auto n : n_list) {
    out.emplace_back(n, profile.rows[n - target.size()].balance());
  }
  return out;
}

DiscrepancySeries discrepancy_series(WordView prefix, const Word &target, double frequency)
{
  if (target.empty()) {
    throw InputError("discrepancy target must be non-empty");
  }
  if (!(frequency >= 0.0 && frequency <= 1.0)) {
    throw InputError("frequency must lie in [0, 1]");
  }
  DiscrepancySeries s;
  s.target = target;
  s.frequency = frequency;
  s.values.assign(prefix.size() + 1, 0.0);
  auto const L = target.size();
  std::size_t count = 0;
  for (std::size_t N = 1; N <= prefix.size(); ++N) {
    if (occurs_at(prefix, N, target)) {
      ++count;
    }
    double const positions = N >= L ? static_cast<double>(N - L + 1) : 0.0;
    double const d = static_cast<double>(count) - positions * frequency;
    s.values[N] = d;
    s.sup_abs = std::max(s.sup_abs, std::abs(d));
  }
  return s;
}

Letter CollaredRecoding::letter_of(WordView block) const
{
  auto it = std::lower_bound(blocks.factors.begin(), blocks.factors.end(), block,
                             [](auto const &a, auto const &b) {
                               return std::lexicographical_compare(a.begin(), a.end(), b.begin(),
                                                                   b.end());
                             });
  if (it == blocks.factors.end() || !std::equal(it->begin(), it->end(), block.begin(), block.end())) {
    throw InputError("window is not a factor of the language");
  }
  return static_cast<Letter>(it - blocks.factors.begin());
}

CollaredRecoding collar(const Substitution &sub, std::size_t radius)
{
  CollaredRecoding rec;
  rec.radius = radius;
  rec.blocks = factors(sub, 2 * radius + 1);
  std::vector<std::string> names;
  for (auto const &b : rec.blocks.factors) {
    std::string name;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (i > 0 && !sub.alphabet().compact()) {
        name += '.';
      }
      name += sub.alphabet().name(b[i]);
    }
    names.push_back(std::move(name));
  }
  rec.alphabet = Alphabet(std::move(names));
  return rec;
}

Word recode(const CollaredRecoding &rec, WordView w)
{
  auto const width = 2 * rec.radius + 1;
  if (w.size() < width) {
    throw InputError("word of length " + std::to_string(w.size()) +
                     " is shorter than the collar width " + std::to_string(width));
  }
  Word out;
  out.reserve(w.size() - 2 * rec.radius);
  for (std::size_t k = 0; k + width <= w.size(); ++k) {
    out.push_back(rec.letter_of(w.subspan(k, width)));
  }
  return out;
}

FactorSet collared_factors(const Substitution &sub, const CollaredRecoding &rec, std::size_t n)
{
  if (n == 0) {
    throw InputError("factor length must be positive");
  }
  FactorSet out;
  out.n = n;
  for (auto const &u : factors(sub, n + 2 * rec.radius).factors) {
    out.factors.push_back(recode(rec, u));
  }
  std::sort(out.factors.begin(), out.factors.end());
  out.factors.erase(std::unique(out.factors.begin(), out.factors.end()), out.factors.end());
  return out;
}

std::vector<BalanceProfile> collared_profiles(const Substitution &sub,
                                              const CollaredRecoding &rec, std::size_t n_max)
{
  auto const extendable = collared_factors(sub, rec, n_max);
  std::vector<BalanceProfile> out;
  for (Letter c = 0; c < rec.alphabet.size(); ++c) {
    out.push_back(balance_profile_from_factors(extendable, Word{c}, n_max));
  }
  return out;
}

const char *to_string(BalanceTrend t)
{
  switch (t) {
  case BalanceTrend::BoundedObserved:
    return "BOUNDED_OBSERVED";
  case BalanceTrend::GrowthObserved:
    return "GROWTH_OBSERVED";
  }
  return "?";
}

GrowthAssessment assess_growth(const BalanceProfile &profile)
{
  GrowthAssessment g;
  if (profile.rows.empty()) {
    return g;
  }
  auto const n_max = profile.rows.back().n;
  auto const threshold = static_cast<std::size_t>(std::sqrt(static_cast<double>(n_max)));
  std::size_t running = 0;
  bool seen_late = false;
  std::vector<double> xs, ys;
  for (auto const &row : profile.rows) {
    bool const late = row.n > threshold;
    if (late && !seen_late) {
      g.early_max = running;
      seen_late = true;
    }
    if (row.balance() > running) {
      if (late && running > 0) {
        ++g.late_increments;
      }
      running = row.balance();
    }
    if (late) {
      xs.push_back(std::log2(static_cast<double>(row.n)));
      ys.push_back(static_cast<double>(running));
    }
  }
  if (!seen_late) {
    g.early_max = running;
  }
  g.final_max = running;
  if (xs.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    g.fitted_slope = sxx > 0 ? sxy / sxx : 0.0;
  }
  g.trend = g.late_increments >= 2 ? BalanceTrend::GrowthObserved : BalanceTrend::BoundedObserved;
  return g;
}

BalanceEvidence balance_evidence(const Substitution &sub, std::size_t n_max,
                                 std::size_t word_length)
{
  if (n_max < std::max<std::size_t>(word_length, 1)) {
    throw InputError("n_max must be at least the word length");
  }
  BalanceEvidence ev;
  ev.n_max = n_max;
  ev.word_length = word_length;
  FactorSet const longest = factors(sub, n_max);
  for (std::size_t c = 0; c < sub.size(); ++c) {
    auto p = balance_profile_from_factors(longest, Word{static_cast<Letter>(c)}, n_max);
    auto g = assess_growth(p);
    ev.letters.push_back({std::move(p), g});
  }
  for (std::size_t k = 2; k <= word_length; ++k) {
    for (auto const &w : factors(sub, k).factors) {
      auto p = balance_profile_from_factors(longest, w, n_max);
      auto g = assess_growth(p);
      ev.words.push_back({std::move(p), g});
    }
  }
  return ev;
}

Word tm_adversarial_word(unsigned m)
{
  if (m == 0) {
    throw InputError("adversarial word index m must be positive");
  }
  auto const tm = thue_morse_substitution();
  Word out;
  Letter seed = 0;
  for (int e = 2 * static_cast<int>(m); e >= 0; e -= 2) {
    auto block = apply_power(tm, Word{seed}, static_cast<unsigned>(e));
    out.insert(out.end(), block.begin(), block.end());
    seed = 1 - seed;
  }
  if (!is_factor(tm, out)) {
    throw ConsistencyError("adversarial word for m = " + std::to_string(m) +
                           " is not a Thue-Morse factor");
  }
  return out;
}

AdversaryCount tm_adversary_count(unsigned m)
{
  auto const w = tm_adversarial_word(m);
  AdversaryCount c;
  c.length = w.size();
  c.alternating_pairs = count_occurrences(Word{0, 1}, w) + count_occurrences(Word{1, 0}, w);
  c.expected_pairs = 2.0 / 3.0 * static_cast<double>(w.size() - 1);
  c.excess = static_cast<double>(c.alternating_pairs) - c.expected_pairs;
  return c;
}

} // namespace plastic
