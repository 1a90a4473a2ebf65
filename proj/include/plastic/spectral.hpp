#pragma once

// Substitution matrices, Perron-Frobenius data and the decomposition of a
// length change into a rescaling plus a mean-zero part.
//
// Matrix convention: column j holds the letter counts of sigma(a_j), so entry
// (i, j) is the number of a_i in sigma(a_j). With a -> ab, b -> a this gives
// [[1, 1], [1, 0]]. Length vectors act from the left: the lengths of the
// level-n supertiles are (M^T)^n l.

#include "plastic/primitive.hpp"
#include "plastic/symbolic.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

namespace plastic {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Per-letter tile lengths, all strictly positive.
using LengthVector = Eigen::VectorXd;

IntMatrix substitution_matrix(const Substitution &sub);

/// Throws InputError unless every entry is finite and strictly positive.
void check_lengths(const LengthVector &lengths, std::size_t alphabet_size);

struct SpectralData
{
  IntMatrix matrix;
  double perron_value = 0.0;
  Eigen::VectorXd frequency;   // right Perron vector, sums to 1
  Eigen::VectorXd left_perron; // left Perron vector, sums to 1
  std::vector<std::complex<double>> secondary_eigenvalues; // by decreasing modulus
  std::vector<double> secondary_moduli;
  /// Spectral certificate: every non-Perron eigenvalue has modulus below
  /// 1 - contraction_margin. This is the plain spectral condition, not a
  /// homological one.
  bool pisot_certificate = false;
};

inline constexpr double contraction_margin = 1e-9;
inline constexpr double default_tolerance = 1e-12;
inline constexpr int default_iteration_budget = 100000;

/// 2x2 matrices use the closed form. Larger ones use power iteration for the
/// Perron pair and a dense eigensolver for the remaining spectrum.
SpectralData perron_data(const IntMatrix &m, double tol = default_tolerance,
                         int budget = default_iteration_budget);

/// Power iteration on m (or its transpose). Exposed so the closed form has an
/// independent check.
struct PowerIteration
{
  double value = 0.0;
  Eigen::VectorXd vector; // sums to 1
  int iterations = 0;
  double residual = 0.0;
};

PowerIteration perron_power_iteration(const Eigen::MatrixXd &m, double tol, int budget);

enum class Contraction
{
  Contracting,
  NotContracting,
  Indeterminate,
};

const char *to_string(Contraction c);

/// l' = scale * l + delta with <f, delta> = 0.
struct LengthChangeDecomposition
{
  double scale = 1.0;
  Eigen::VectorXd delta;
  Contraction contracting = Contraction::Indeterminate;
  /// Largest modulus among the eigenvalues whose left eigenspaces carry delta.
  double decay_rate = 0.0;
  std::vector<std::complex<double>> support;
};

LengthChangeDecomposition decompose_length_change(const LengthVector &from,
                                                  const LengthVector &to,
                                                  const SpectralData &spec);

/// Lengths of sigma^n(a) for every letter a under the given tile lengths,
/// computed as (M^T)^n l.
template <typename Scalar>
Vector<Scalar> supertile_lengths(const IntMatrix &m, unsigned n, const Vector<Scalar> &lengths)
{
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> const mt =
    m.transpose().template cast<Scalar>();
  Vector<Scalar> out = lengths;
  for (unsigned k = 0; k < n; ++k) {
    out = mt * out;
  }
  return out;
}

double supertile_length(const Substitution &sub, Letter letter, unsigned n,
                        const LengthVector &lengths);

/// Letter counts |sigma^n(a)| for every letter. Throws LimitError on int64
/// overflow.
IntVector supertile_sizes(const IntMatrix &m, unsigned n);

} // namespace plastic
