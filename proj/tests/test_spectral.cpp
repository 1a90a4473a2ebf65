#include "oracles.hpp"

#include "plastic/balance.hpp"
#include "plastic/errors.hpp"
#include "plastic/spectral.hpp"
#include "plastic/verdict.hpp"

#include <doctest.h>

#include <cmath>

using namespace plastic;
using oracle::ab;

namespace {

double const phi = (1.0 + std::sqrt(5.0)) / 2.0;

Substitution make(std::vector<std::string> rules)
{
  std::vector<Word> images;
  std::vector<std::string> names;
  for (std::size_t k = 0; k < rules.size(); ++k) {
    images.push_back(ab(rules[k]));
    names.push_back(std::string(1, static_cast<char>('a' + k)));
  }
  return Substitution(Alphabet(names), images);
}

IntMatrix mat(std::initializer_list<std::initializer_list<std::int64_t>> rows)
{
  IntMatrix m(static_cast<Eigen::Index>(rows.size()),
              static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (auto const &r : rows) {
    Eigen::Index j = 0;
    for (auto v : r) {
      m(i, j++) = v;
    }
    ++i;
  }
  return m;
}

LengthVector vec(std::initializer_list<double> v)
{
  LengthVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) {
    out(i++) = x;
  }
  return out;
}

} // namespace

TEST_SUITE("spectral")
{
  TEST_CASE("substitution matrices")
  {
    CHECK(substitution_matrix(fibonacci_substitution()) == mat({{1, 1}, {1, 0}}));
    CHECK(substitution_matrix(thue_morse_substitution()) == mat({{1, 1}, {1, 1}}));
    CHECK(substitution_matrix(make({"a", "b"})) == mat({{1, 0}, {0, 1}}));
    auto const m = substitution_matrix(make({"abbb", "a"}));
    CHECK(m == mat({{1, 1}, {3, 0}}));
    // Column sums are image lengths.
    CHECK(m.colwise().sum()(0) == 4);
  }

  TEST_CASE("Fibonacci Perron data")
  {
    auto const s = perron_data(substitution_matrix(fibonacci_substitution()));
    CHECK(std::abs(s.perron_value - phi) < 1e-12);
    CHECK(s.frequency(0) == doctest::Approx(0.6180339887).epsilon(1e-10));
    CHECK(s.frequency(1) == doctest::Approx(0.3819660113).epsilon(1e-10));
    REQUIRE(s.secondary_moduli.size() == 1);
    CHECK(s.secondary_moduli[0] == doctest::Approx(phi - 1.0).epsilon(1e-12));
    CHECK(s.pisot_certificate);
  }

  TEST_CASE("Thue-Morse Perron data")
  {
    auto const s = perron_data(substitution_matrix(thue_morse_substitution()));
    CHECK(s.perron_value == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(s.frequency(0) == doctest::Approx(0.5));
    CHECK(s.frequency(1) == doctest::Approx(0.5));
    REQUIRE(s.secondary_moduli.size() == 1);
    CHECK(s.secondary_moduli[0] < 1e-12);
    CHECK(s.pisot_certificate);
  }

  TEST_CASE("non-Pisot and unimodular examples")
  {
    auto const np = perron_data(substitution_matrix(make({"abbb", "a"})));
    CHECK(np.perron_value == doctest::Approx((1.0 + std::sqrt(13.0)) / 2.0));
    CHECK(np.secondary_moduli[0] == doctest::Approx((std::sqrt(13.0) - 1.0) / 2.0));
    CHECK_FALSE(np.pisot_certificate);
    // Period doubling: secondary eigenvalue -1.
    auto const pd = perron_data(substitution_matrix(make({"ab", "aa"})));
    CHECK(pd.secondary_moduli[0] == doctest::Approx(1.0));
    CHECK_FALSE(pd.pisot_certificate);
  }

  TEST_CASE("Perron data rejects bad matrices")
  {
    CHECK_THROWS_AS(perron_data(mat({{1, 1}, {0, 1}})), PreconditionError);
    CHECK_THROWS_AS(perron_data(mat({{1, -1}, {1, 1}})), InputError);
    CHECK_THROWS_AS(perron_data(IntMatrix(2, 3)), InputError);
  }

  TEST_CASE("eigen-equations hold for larger matrices")
  {
    for (auto const &sub : {make({"b", "c", "ab"}), make({"abc", "ac", "b"}),
                            make({"ab", "c", "d", "a"}), make({"abcde", "a", "b", "c", "d"})}) {
      auto const m = substitution_matrix(sub);
      auto const s = perron_data(m);
      Eigen::MatrixXd const md = m.cast<double>();
      double const tol = 10.0 * default_tolerance * std::max(1.0, s.perron_value);
      CHECK((md * s.frequency - s.perron_value * s.frequency).cwiseAbs().maxCoeff() < tol);
      CHECK((md.transpose() * s.left_perron - s.perron_value * s.left_perron)
              .cwiseAbs()
              .maxCoeff() < tol);
      CHECK(s.frequency.sum() == doctest::Approx(1.0));
      CHECK(s.frequency.minCoeff() > 0.0);
      CHECK(s.secondary_moduli.size() == sub.size() - 1);
      bool const certificate = s.secondary_moduli.front() < 1.0 - contraction_margin;
      CHECK(s.pisot_certificate == certificate);
      // The closed form for 2x2 and the dense route must agree with plain
      // power iteration on the frequency vector.
      auto const pi = perron_power_iteration(md, 1e-13, 100000);
      CHECK(std::abs(pi.value - s.perron_value) < 1e-9);
    }
  }

  TEST_CASE("frequencies match empirical prefix ratios")
  {
    for (auto const &sub : {fibonacci_substitution(), thue_morse_substitution()}) {
      auto const s = perron_data(substitution_matrix(sub));
      std::size_t const n = 100000;
      auto const prefix = fixed_point_prefix(sub, 0, n);
      for (Letter x : {0u, 1u}) {
        auto const constant = balance_profile(sub, Word{x}, 1000).observed_constant;
        double const ratio = static_cast<double>(oracle::count(Word{x}, prefix)) / n;
        CHECK(std::abs(ratio - s.frequency(x)) <= static_cast<double>(constant) / n);
      }
    }
  }

  TEST_CASE("length change decomposition")
  {
    auto const spec = perron_data(substitution_matrix(fibonacci_substitution()));
    auto const l = vec({1.0, 1.0});

    auto const same = decompose_length_change(l, 2.0 * l, spec);
    CHECK(same.scale == doctest::Approx(2.0));
    CHECK(same.delta.norm() < 1e-14);
    CHECK(same.contracting == Contraction::Contracting);
    CHECK(same.decay_rate == 0.0);

    auto const d = decompose_length_change(l, vec({2.0, 1.0}), spec);
    CHECK(d.scale == doctest::Approx(1.0 + 1.0 / phi).epsilon(1e-12));
    CHECK(d.delta(0) == doctest::Approx(2.0 - d.scale));
    // delta is parallel to (1 - phi, 1) and orthogonal to f.
    Eigen::Vector2d const dir(1.0 - phi, 1.0);
    double const cosine = std::abs(d.delta.dot(dir)) / (d.delta.norm() * dir.norm());
    CHECK(cosine == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(spec.frequency.dot(d.delta)) < 1e-10);
    CHECK((d.scale * l + d.delta - vec({2.0, 1.0})).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(d.contracting == Contraction::Contracting);
    CHECK(std::abs(d.decay_rate - (phi - 1.0)) < 1e-10);

    // delta is always orthogonal to f, so it never has a component on the
    // Perron eigenvalue; non-contracting cases need a second expanding
    // eigenvalue (see the non-Pisot example below).
    auto const other = decompose_length_change(vec({1.0, 0.5}), vec({phi, 1.0}), spec);
    CHECK(std::abs(spec.frequency.dot(other.delta)) < 1e-12);
    CHECK(other.decay_rate == doctest::Approx(phi - 1.0));
  }

  TEST_CASE("decomposition flags unimodular and expanding directions")
  {
    auto const np = perron_data(substitution_matrix(make({"abbb", "a"})));
    auto const d = decompose_length_change(vec({1.0, 1.0}), vec({2.0, 1.0}), np);
    CHECK(d.contracting == Contraction::NotContracting);
    auto const pd = perron_data(substitution_matrix(make({"ab", "aa"})));
    auto const u = decompose_length_change(vec({1.0, 1.0}), vec({2.0, 1.0}), pd);
    CHECK(u.contracting == Contraction::Indeterminate);
    CHECK_THROWS_AS(decompose_length_change(vec({1.0, 0.0}), vec({1.0, 1.0}), pd), InputError);
  }

  TEST_CASE("defective matrices handled through annihilators")
  {
    // a -> bc, b -> cc, c -> ab: eigenvalue -1 with a 2x2 Jordan block.
    auto const jordan = perron_data(substitution_matrix(make({"bc", "cc", "ab"})));
    CHECK(jordan.perron_value == doctest::Approx(2.0));
    auto const d = decompose_length_change(vec({1.0, 1.0, 1.0}), vec({1.0, 2.0, 3.0}), jordan);
    CHECK(std::abs(jordan.frequency.dot(d.delta)) < 1e-10);
    CHECK(d.contracting == Contraction::Indeterminate);
    CHECK(d.decay_rate == doctest::Approx(1.0).epsilon(1e-6));

    // a -> bc, b -> bc, c -> ac: nilpotent block at 0, so delta dies in two steps.
    auto const nil = perron_data(substitution_matrix(make({"bc", "bc", "ac"})));
    auto const z = decompose_length_change(vec({1.0, 1.0, 1.0}), vec({1.0, 2.0, 3.0}), nil);
    CHECK(z.contracting == Contraction::Contracting);
    CHECK(z.decay_rate < 1e-6);
  }

  TEST_CASE("supertile lengths equal word expansion for n <= 12")
  {
    for (auto const &sub : {fibonacci_substitution(), thue_morse_substitution(),
                            make({"b", "c", "ab"})}) {
      LengthVector l = LengthVector::LinSpaced(static_cast<Eigen::Index>(sub.size()), 1.0, 2.5);
      for (Letter x = 0; x < sub.size(); ++x) {
        Word w{x};
        for (unsigned n = 0; n <= 12; ++n) {
          double expected = 0.0;
          for (Letter y : w) {
            expected += l(y);
          }
          CHECK(supertile_length(sub, x, n, l) == doctest::Approx(expected).epsilon(1e-13));
          CHECK(supertile_sizes(substitution_matrix(sub), n)(x) ==
                static_cast<std::int64_t>(w.size()));
          w = plastic::apply(sub, w);
        }
      }
    }
    CHECK(supertile_length(fibonacci_substitution(), 0, 2, vec({1.0, 1.0})) == 3.0);
    CHECK(supertile_length(fibonacci_substitution(), 1, 0, vec({1.5, 1.0})) == 1.0);
  }

  TEST_CASE("supertile sizes report overflow")
  {
    CHECK_THROWS_AS(supertile_sizes(substitution_matrix(thue_morse_substitution()), 80),
                    LimitError);
  }

  TEST_CASE("level-n length differences shrink at rate phi - 1")
  {
    auto const fib = fibonacci_substitution();
    auto const m = substitution_matrix(fib);
    auto const spec = perron_data(m);
    auto const l = vec({1.0, 1.0});
    auto const d = decompose_length_change(l, vec({2.0, 1.0}), spec);
    LengthVector const matched = vec({2.0, 1.0}) / d.scale;
    double previous = 0.0;
    for (unsigned n = 1; n <= 20; ++n) {
      auto const diff = (supertile_lengths(m, n, matched) - supertile_lengths(m, n, l))
                          .cwiseAbs()
                          .maxCoeff();
      CHECK(diff <= 1.0 * std::pow(0.619, n));
      if (n == 20) {
        CHECK(std::abs(diff / previous - (phi - 1.0)) < 1e-6);
      }
      previous = diff;
    }
  }

  TEST_CASE("verdicts")
  {
    auto const fib = fibonacci_substitution();
    auto const fv = plasticity_verdict(balance_evidence(fib, 300, 2),
                                       perron_data(substitution_matrix(fib)));
    CHECK(fv.letters == LetterVerdict::PlasticCertified);
    CHECK(fv.total == TotalVerdict::TotallyPlasticEvidence);

    auto const tm = thue_morse_substitution();
    auto const tv = plasticity_verdict(balance_evidence(tm, 1000, 2),
                                       perron_data(substitution_matrix(tm)));
    CHECK(tv.letters == LetterVerdict::PlasticCertified);
    CHECK(tv.total == TotalVerdict::GrowthObserved);
    CHECK(std::find(tv.growing_words.begin(), tv.growing_words.end(), ab("ab")) !=
          tv.growing_words.end());

    auto const one = make({"aa"});
    auto const ov = plasticity_verdict(balance_evidence(one, 50, 2),
                                       perron_data(substitution_matrix(one)));
    CHECK(ov.letters == LetterVerdict::PlasticCertified);
    CHECK(std::string(to_string(ov.letters)) == "PLASTIC_CERTIFIED");
  }

  TEST_CASE("verdict without certificate follows letter evidence")
  {
    auto const np = make({"abbb", "a"});
    auto const spec = perron_data(substitution_matrix(np));
    auto const v = plasticity_verdict(balance_evidence(np, 1000, 1), spec);
    CHECK(v.letters == LetterVerdict::NotPlasticEvidence);
    CHECK_FALSE(v.growing_letters.empty());
  }

  TEST_CASE("certificate with letter growth is inconsistent")
  {
    auto const tm = thue_morse_substitution();
    auto ev = balance_evidence(tm, 200, 1);
    ev.letters[0].growth.trend = BalanceTrend::GrowthObserved;
    CHECK_THROWS_AS(plasticity_verdict(ev, perron_data(substitution_matrix(tm))),
                    ConsistencyError);
  }
}
