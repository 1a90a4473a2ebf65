#pragma once

// Alphabets, words, substitutions and exact factor enumeration.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace plastic {

using Letter = std::uint32_t;
using Word = std::vector<Letter>;
using WordView = std::span<const Letter>;

/// Ordered set of distinct letter names. The order indexes every vector and
/// matrix in the library.
class Alphabet
{
public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> letters);

  std::size_t size() const { return letters_.size(); }
  const std::string &name(Letter i) const { return letters_.at(i); }
  const std::vector<std::string> &letters() const { return letters_; }

  std::optional<Letter> find(std::string_view name) const;
  /// Throws InputError for names not in the alphabet.
  Letter index(std::string_view name) const;

  /// True when every letter name is a single character, so words print
  /// without separators.
  bool compact() const { return compact_; }

  bool operator==(const Alphabet &other) const { return letters_ == other.letters_; }

private:
  std::vector<std::string> letters_;
  bool compact_ = true;
};

/// A rule a_i -> sigma(a_i) for every letter of the alphabet.
class Substitution
{
public:
  Substitution(Alphabet alphabet, std::vector<Word> images);

  const Alphabet &alphabet() const { return alphabet_; }
  std::size_t size() const { return alphabet_.size(); }
  const Word &image(Letter a) const { return images_.at(a); }
  const std::vector<Word> &images() const { return images_; }

  bool non_erasing() const;
  std::size_t max_image_length() const;

  bool operator==(const Substitution &other) const
  {
    return alphabet_ == other.alphabet_ && images_ == other.images_;
  }

private:
  Alphabet alphabet_;
  std::vector<Word> images_;
};

/// a -> ab, b -> a
Substitution fibonacci_substitution();
/// a -> ab, b -> ba
Substitution thue_morse_substitution();

/// Words are written as concatenated names for compact alphabets and as
/// whitespace separated tokens otherwise. Parsing accepts both forms.
Word parse_word(const Alphabet &alphabet, std::string_view text);
std::string format_word(const Alphabet &alphabet, WordView w);

Word apply(const Substitution &sub, WordView w);
Word apply_power(const Substitution &sub, WordView w, unsigned k);

/// First n letters of the one-sided fixed point lim sigma^k(seed).
Word fixed_point_prefix(const Substitution &sub, Letter seed, std::size_t n);

/// Overlapping occurrences of w in u.
std::size_t count_occurrences(WordView w, WordView u);

bool is_primitive(const Substitution &sub);
/// Throws PreconditionError naming the tested matrix power.
void require_primitive(const Substitution &sub);

struct FactorSet
{
  std::size_t n = 0;
  std::vector<Word> factors; // sorted in alphabet order, unique

  std::size_t size() const { return factors.size(); }
  bool contains(WordView w) const;
};

/// Length-n factors of the subshift of a primitive non-erasing substitution.
FactorSet factors(const Substitution &sub, std::size_t n);

/// Same set computed by closing the length-n windows of sigma^m(letters)
/// under "length-n windows of sigma(u)" until a round adds nothing. Slower;
/// kept as a second route for the default enumerator.
FactorSet factors_by_closure(const Substitution &sub, std::size_t n);

/// Sorted set of distinct length-n windows of u.
FactorSet windows(WordView u, std::size_t n);

bool is_factor(const Substitution &sub, WordView w);

/// Letters p, s and a power k such that ps is a factor, sigma^k(p) ends with p
/// and sigma^k(s) begins with s. Iterating sigma^k on p.s converges to a
/// bi-infinite fixed sequence.
struct BiInfiniteSeed
{
  Letter left = 0;
  Letter right = 0;
  unsigned power = 1;

  bool operator==(const BiInfiniteSeed &) const = default;
};

BiInfiniteSeed biinfinite_seed(const Substitution &sub, unsigned budget = 100000);

/// Mechanical word over {a, b} (letters 0 and 1): s_k = a exactly when
/// floor((k+1)alpha + rho) - floor(k alpha + rho) = 1. Rational alpha is
/// accepted; it yields a periodic word and is not detected.
Word sturmian_prefix(double alpha, double rho, std::size_t n);

Alphabet sturmian_alphabet();

} // namespace plastic
