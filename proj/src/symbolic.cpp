#include "plastic/symbolic.hpp"

#include "plastic/errors.hpp"
#include "plastic/primitive.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

namespace plastic {

Alphabet::Alphabet(std::vector<std::string> letters)
  : letters_(std::move(letters))
{
  if (letters_.empty()) {
    throw InputError("alphabet must contain at least one letter");
  }
  std::set<std::string> seen;
  for (auto const &l : letters_) {
    if (l.empty()) {
      throw InputError("letter names must be non-empty");
    }
    for (char ch : l) {
      if (std::isspace(static_cast<unsigned char>(ch))) {
        throw InputError("letter name '" + l + "' contains whitespace");
      }
    }
    if (!seen.insert(l).second) {
      throw InputError("duplicate letter '" + l + "'");
    }
    if (l.size() != 1) {
      compact_ = false;
    }
  }
}

std::optional<Letter> Alphabet::find(std::string_view name) const
{
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (letters_[i] == name) {
      return static_cast<Letter>(i);
    }
  }
  return std::nullopt;
}

Letter Alphabet::index(std::string_view name) const
{
  if (auto i = find(name)) {
    return *i;
  }
  throw InputError("letter '" + std::string(name) + "' is not in the alphabet");
}

Substitution::Substitution(Alphabet alphabet, std::vector<Word> images)
  : alphabet_(std::move(alphabet)), images_(std::move(images))
{
  if (images_.size() != alphabet_.size()) {
    throw InputError("substitution needs exactly one rule per letter");
  }
  for (auto const &img : images_) {
    for (Letter x : img) {
      if (x >= alphabet_.size()) {
        throw InputError("rule image uses a letter outside the alphabet");
      }
    }
  }
}

bool Substitution::non_erasing() const
{
  return std::none_of(images_.begin(), images_.end(), [](Word const &w) { return w.empty(); });
}

std::size_t Substitution::max_image_length() const
{
  std::size_t m = 0;
  for (auto const &w : images_) {
    m = std::max(m, w.size());
  }
  return m;
}

Substitution fibonacci_substitution()
{
  return Substitution(Alphabet({"a", "b"}), {{0, 1}, {0}});
}

Substitution thue_morse_substitution()
{
  return Substitution(Alphabet({"a", "b"}), {{0, 1}, {1, 0}});
}

Word parse_word(const Alphabet &alphabet, std::string_view text)
{
  Word out;
  bool has_space = std::any_of(text.begin(), text.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c));
  });
  if (!has_space && alphabet.compact()) {
    for (char c : text) {
      out.push_back(alphabet.index(std::string_view(&c, 1)));
    }
    return out;
  }
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    out.push_back(alphabet.index(tok));
  }
  return out;
}

std::string format_word(const Alphabet &alphabet, WordView w)
{
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i > 0 && !alphabet.compact()) {
      out += ' ';
    }
    out += alphabet.name(w[i]);
  }
  return out;
}

Word apply(const Substitution &sub, WordView w)
{
  Word out;
  std::size_t total = 0;
  for (Letter x : w) {
    if (x >= sub.size()) {
      throw InputError("word contains a letter outside the substitution's alphabet");
    }
    total += sub.image(x).size();
  }
  out.reserve(total);
  for (Letter x : w) {
    auto const &img = sub.image(x);
    out.insert(out.end(), img.begin(), img.end());
  }
  return out;
}

Word apply_power(const Substitution &sub, WordView w, unsigned k)
{
  Word out(w.begin(), w.end());
  for (unsigned i = 0; i < k; ++i) {
    out = plastic::apply(sub, out);
  }
  return out;
}

Word fixed_point_prefix(const Substitution &sub, Letter seed, std::size_t n)
{
  if (seed >= sub.size()) {
    throw InputError("seed letter outside the alphabet");
  }
  if (!sub.non_erasing()) {
    throw PreconditionError("substitution is erasing");
  }
  auto const &first = sub.image(seed);
  if (first.front() != seed) {
    throw PreconditionError("seed '" + sub.alphabet().name(seed) +
                            "' is not prolongable: its image does not begin with it");
  }
  Word cur{seed};
  while (cur.size() < n) {
    // sigma(cur) extends cur, so only the first n letters of it are needed.
    Word next;
    next.reserve(n);
    for (Letter x : cur) {
      auto const &img = sub.image(x);
      next.insert(next.end(), img.begin(), img.end());
      if (next.size() >= n) {
        break;
      }
    }
    if (next.size() <= cur.size()) {
      throw PreconditionError("fixed point of '" + sub.alphabet().name(seed) + "' does not grow");
    }
    cur = std::move(next);
  }
  cur.resize(n);
  return cur;
}

std::size_t count_occurrences(WordView w, WordView u)
{
  if (w.size() > u.size()) {
    return 0;
  }
  std::size_t count = 0;
  for (std::size_t p = 0; p + w.size() <= u.size(); ++p) {
    if (std::equal(w.begin(), w.end(), u.begin() + static_cast<std::ptrdiff_t>(p))) {
      ++count;
    }
  }
  return count;
}

namespace {

unsigned wielandt_exponent(std::size_t n)
{
  return static_cast<unsigned>((n - 1) * (n - 1) + 1);
}

} // namespace

bool is_primitive(const Substitution &sub)
{
  auto const n = static_cast<Eigen::Index>(sub.size());
  Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Letter x : sub.image(static_cast<Letter>(j))) {
      adj(x, j) = 1;
    }
  }
  return is_primitive_matrix(adj);
}

void require_primitive(const Substitution &sub)
{
  if (!sub.non_erasing()) {
    throw PreconditionError("substitution is erasing");
  }
  if (!is_primitive(sub)) {
    throw PreconditionError("substitution is not primitive: matrix power " +
                            std::to_string(wielandt_exponent(sub.size())) +
                            " has a zero entry");
  }
}

bool FactorSet::contains(WordView w) const
{
  if (w.size() != n) {
    return false;
  }
  return std::binary_search(factors.begin(), factors.end(), w,
                            [](auto const &a, auto const &b) {
                              return std::lexicographical_compare(a.begin(), a.end(), b.begin(),
                                                                  b.end());
                            });
}

FactorSet windows(WordView u, std::size_t n)
{
  FactorSet out{n, {}};
  if (n == 0 || u.size() < n) {
    return out;
  }
  std::vector<std::size_t> starts(u.size() - n + 1);
  for (std::size_t i = 0; i < starts.size(); ++i) {
    starts[i] = i;
  }
  auto less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(u.begin() + a, u.begin() + a + n, u.begin() + b,
                                        u.begin() + b + n);
  };
  auto same = [&](std::size_t a, std::size_t b) {
    return std::equal(u.begin() + a, u.begin() + a + n, u.begin() + b);
  };
  std::sort(starts.begin(), starts.end(), less);
  starts.erase(std::unique(starts.begin(), starts.end(), same), starts.end());
  out.factors.reserve(starts.size());
  for (auto s : starts) {
    out.factors.emplace_back(u.begin() + s, u.begin() + s + n);
  }
  return out;
}

namespace {

// Sorted union of several factor sets of the same length.
FactorSet merge(std::size_t n, std::vector<FactorSet> const &parts)
{
  FactorSet out{n, {}};
  for (auto const &p : parts) {
    out.factors.insert(out.factors.end(), p.factors.begin(), p.factors.end());
  }
  std::sort(out.factors.begin(), out.factors.end());
  out.factors.erase(std::unique(out.factors.begin(), out.factors.end()), out.factors.end());
  return out;
}

void check_length(std::size_t n)
{
  if (n == 0) {
    throw InputError("factor length must be positive");
  }
}

// Least k with |sigma^k(c)| >= target for every letter c.
unsigned levels_until_length(const Substitution &sub, std::size_t target)
{
  std::vector<std::size_t> len(sub.size(), 1);
  unsigned k = 0;
  auto shortest = [&] { return *std::min_element(len.begin(), len.end()); };
  while (shortest() < target) {
    std::vector<std::size_t> next(sub.size(), 0);
    for (std::size_t c = 0; c < sub.size(); ++c) {
      for (Letter x : sub.image(static_cast<Letter>(c))) {
        next[c] += len[x];
      }
    }
    if (next == len) {
      throw PreconditionError("substitution images do not grow");
    }
    len = std::move(next);
    ++k;
  }
  return k;
}

FactorSet single_letter_factors(std::size_t n)
{
  return FactorSet{n, {Word(n, 0)}};
}

} // namespace

FactorSet factors_by_closure(const Substitution &sub, std::size_t n)
{
  check_length(n);
  require_primitive(sub);
  if (sub.size() == 1) {
    return single_letter_factors(n);
  }
  unsigned const m = levels_until_length(sub, n);
  std::vector<FactorSet> seeds;
  for (std::size_t c = 0; c < sub.size(); ++c) {
    seeds.push_back(windows(apply_power(sub, Word{static_cast<Letter>(c)}, m), n));
  }
  FactorSet current = merge(n, seeds);
  for (;;) {
    std::vector<FactorSet> parts{current};
    for (auto const &u : current.factors) {
      parts.push_back(windows(plastic::apply(sub, u), n));
    }
    FactorSet next = merge(n, parts);
    if (next.factors == current.factors) {
      return current;
    }
    current = std::move(next);
  }
}

FactorSet factors(const Substitution &sub, std::size_t n)
{
  check_length(n);
  require_primitive(sub);
  if (sub.size() == 1) {
    return single_letter_factors(n);
  }
  FactorSet two = factors_by_closure(sub, 2);
  if (n == 2) {
    return two;
  }
  if (n == 1) {
    // Primitive: every letter occurs.
    FactorSet one{1, {}};
    for (std::size_t c = 0; c < sub.size(); ++c) {
      one.factors.push_back(Word{static_cast<Letter>(c)});
    }
    return one;
  }
  // Once every sigma^k(c) has length >= n-1, a length-n factor meets the
  // images of at most two consecutive letters, which form a factor of length 2.
  unsigned const k = levels_until_length(sub, n - 1);
  std::vector<FactorSet> parts;
  for (auto const &pair : two.factors) {
    parts.push_back(windows(apply_power(sub, pair, k), n));
  }
  return merge(n, parts);
}

bool is_factor(const Substitution &sub, WordView w)
{
  require_primitive(sub);
  if (w.empty()) {
    return true;
  }
  for (Letter x : w) {
    if (x >= sub.size()) {
      return false;
    }
  }
  if (sub.size() == 1) {
    return true;
  }
  FactorSet two = factors_by_closure(sub, 2);
  unsigned const k = levels_until_length(sub, std::max<std::size_t>(w.size(), 2) - 1);
  for (auto const &pair : two.factors) {
    Word big = apply_power(sub, pair, k);
    if (std::search(big.begin(), big.end(), w.begin(), w.end()) != big.end()) {
      return true;
    }
  }
  return false;
}

BiInfiniteSeed biinfinite_seed(const Substitution &sub, unsigned budget)
{
  require_primitive(sub);
  FactorSet two = factors(sub, 2);
  auto const n = sub.size();
  std::vector<Letter> first(n), last(n);
  for (std::size_t c = 0; c < n; ++c) {
    first[c] = sub.image(static_cast<Letter>(c)).front();
    last[c] = sub.image(static_cast<Letter>(c)).back();
  }
  // first_k[c] / last_k[c]: first and last letters of sigma^k(c).
  std::vector<Letter> first_k = first, last_k = last;
  for (unsigned k = 1; k <= budget; ++k) {
    for (auto const &pair : two.factors) {
      Letter p = pair[0], s = pair[1];
      if (last_k[p] == p && first_k[s] == s) {
        return BiInfiniteSeed{p, s, k};
      }
    }
    for (std::size_t c = 0; c < n; ++c) {
      first_k[c] = first[first_k[c]];
      last_k[c] = last[last_k[c]];
    }
  }
  throw LimitError("no bi-infinite seed found within " + std::to_string(budget) + " powers");
}

Alphabet sturmian_alphabet()
{
  return Alphabet({"a", "b"});
}

Word sturmian_prefix(double alpha, double rho, std::size_t n)
{
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InputError("alpha must lie in (0, 1)");
  }
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw InputError("rho must lie in [0, 1)");
  }
  Word out(n);
  double prev = std::floor(rho);
  for (std::size_t k = 0; k < n; ++k) {
    double next = std::floor(static_cast<double>(k + 1) * alpha + rho);
    out[k] = (next - prev == 1.0) ? 0 : 1;
    prev = next;
  }
  return out;
}

} // namespace plastic
