#include "plastic/spectral.hpp"

#include "plastic/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace plastic {

IntMatrix substitution_matrix(const Substitution &sub)
{
  auto const n = static_cast<Eigen::Index>(sub.size());
  IntMatrix m = IntMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Letter x : sub.image(static_cast<Letter>(j))) {
      m(x, j) += 1;
    }
  }
  return m;
}

void check_lengths(const LengthVector &lengths, std::size_t alphabet_size)
{
  if (static_cast<std::size_t>(lengths.size()) != alphabet_size) {
    throw InputError("expected " + std::to_string(alphabet_size) + " lengths, got " +
                     std::to_string(lengths.size()));
  }
  for (Eigen::Index i = 0; i < lengths.size(); ++i) {
    if (!std::isfinite(lengths(i)) || lengths(i) <= 0.0) {
      throw InputError("tile lengths must be finite and positive");
    }
  }
}

const char *to_string(Contraction c)
{
  switch (c) {
  case Contraction::Contracting:
    return "CONTRACTING";
  case Contraction::NotContracting:
    return "NOT_CONTRACTING";
  case Contraction::Indeterminate:
    return "INDETERMINATE";
  }
  return "?";
}

PowerIteration perron_power_iteration(const Eigen::MatrixXd &m, double tol, int budget)
{
  PowerIteration out;
  auto const n = m.rows();
  Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (int it = 1; it <= budget; ++it) {
    Eigen::VectorXd w = m * v;
    double const lambda = w.sum();
    w /= lambda;
    double const change = (w - v).cwiseAbs().maxCoeff();
    v = std::move(w);
    if (change <= tol * v.cwiseAbs().maxCoeff()) {
      out.iterations = it;
      break;
    }
    if (it == budget) {
      std::ostringstream msg;
      msg << "power iteration did not converge in " << budget << " steps (last change " << change
          << ")";
      throw ConvergenceError(msg.str());
    }
  }
  Eigen::VectorXd const mv = m * v;
  out.value = mv.sum();
  out.vector = v;
  out.residual = (mv - out.value * v).cwiseAbs().maxCoeff();
  return out;
}

namespace {

void sort_by_modulus(std::vector<std::complex<double>> &values)
{
  std::stable_sort(values.begin(), values.end(), [](auto const &a, auto const &b) {
    if (std::abs(a) != std::abs(b)) {
      return std::abs(a) > std::abs(b);
    }
    if (a.real() != b.real()) {
      return a.real() > b.real();
    }
    return a.imag() > b.imag();
  });
}

void check_square_nonnegative(const IntMatrix &m)
{
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw InputError("substitution matrix must be square and non-empty");
  }
  if ((m.array() < 0).any()) {
    throw InputError("substitution matrix has a negative entry");
  }
}

// Closed form for [[p, q], [r, s]] with q, r > 0 (true for primitive 2x2).
void closed_form_2x2(const IntMatrix &m, SpectralData &out)
{
  double const p = static_cast<double>(m(0, 0)), q = static_cast<double>(m(0, 1));
  double const r = static_cast<double>(m(1, 0)), s = static_cast<double>(m(1, 1));
  double const root = std::sqrt((p - s) * (p - s) + 4.0 * q * r);
  double const lambda = 0.5 * (p + s + root);
  double const det = p * s - q * r;
  double const second = det / lambda;
  // lambda - p and lambda - s without cancellation: (lambda-p)(lambda-s) = qr.
  double minus_p, minus_s;
  if (p >= s) {
    minus_s = 0.5 * (p - s + root);
    minus_p = q * r / minus_s;
  } else {
    minus_p = 0.5 * (s - p + root);
    minus_s = q * r / minus_p;
  }
  Eigen::Vector2d right(q, minus_p);
  Eigen::Vector2d left(r, minus_p);
  (void)minus_s;
  out.perron_value = lambda;
  out.frequency = right / right.sum();
  out.left_perron = left / left.sum();
  out.secondary_eigenvalues = {std::complex<double>(second, 0.0)};
}

} // namespace

SpectralData perron_data(const IntMatrix &m, double tol, int budget)
{
  check_square_nonnegative(m);
  if (!is_primitive_matrix(m)) {
    throw PreconditionError("matrix is not primitive");
  }
  SpectralData out;
  out.matrix = m;
  auto const n = m.rows();
  if (n == 1) {
    out.perron_value = static_cast<double>(m(0, 0));
    out.frequency = Eigen::VectorXd::Ones(1);
    out.left_perron = Eigen::VectorXd::Ones(1);
  } else if (n == 2) {
    closed_form_2x2(m, out);
  } else {
    Eigen::MatrixXd const md = m.cast<double>();
    auto right = perron_power_iteration(md, tol, budget);
    auto left = perron_power_iteration(md.transpose(), tol, budget);
    out.perron_value = right.value;
    out.frequency = right.vector;
    out.left_perron = left.vector;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(md, false);
    if (solver.info() != Eigen::Success) {
      throw ConvergenceError("eigenvalue computation failed");
    }
    std::vector<std::complex<double>> all;
    for (Eigen::Index i = 0; i < n; ++i) {
      all.push_back(solver.eigenvalues()(i));
    }
    auto perron = std::min_element(all.begin(), all.end(), [&](auto const &a, auto const &b) {
      return std::abs(a - out.perron_value) < std::abs(b - out.perron_value);
    });
    all.erase(perron);
    out.secondary_eigenvalues = std::move(all);
  }
  sort_by_modulus(out.secondary_eigenvalues);
  for (auto const &z : out.secondary_eigenvalues) {
    out.secondary_moduli.push_back(std::abs(z));
  }
  out.pisot_certificate =
    std::all_of(out.secondary_moduli.begin(), out.secondary_moduli.end(),
                [](double r) { return r < 1.0 - contraction_margin; });

  Eigen::MatrixXd const md = m.cast<double>();
  double const right_residual =
    (md * out.frequency - out.perron_value * out.frequency).cwiseAbs().maxCoeff();
  double const left_residual =
    (md.transpose() * out.left_perron - out.perron_value * out.left_perron).cwiseAbs().maxCoeff();
  double const allowed = 10.0 * tol * std::max(1.0, out.perron_value);
  if (right_residual > allowed || left_residual > allowed) {
    std::ostringstream msg;
    msg << "Perron vectors did not reach tolerance: residuals " << right_residual << ", "
        << left_residual;
    throw ConvergenceError(msg.str());
  }
  return out;
}

namespace {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

struct EigenGroup
{
  std::complex<double> value;
  int multiplicity = 0;
};

std::vector<EigenGroup> group_eigenvalues(const ComplexVector &values)
{
  std::vector<EigenGroup> groups;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    auto const z = values(i);
    auto it = std::find_if(groups.begin(), groups.end(), [&](EigenGroup const &g) {
      return std::abs(g.value - z) <= 1e-5 * std::max(1.0, std::abs(z));
    });
    if (it == groups.end()) {
      groups.push_back({z, 1});
    } else {
      it->value = (it->value * static_cast<double>(it->multiplicity) + z) /
                  static_cast<double>(it->multiplicity + 1);
      ++it->multiplicity;
    }
  }
  return groups;
}

// Eigenvalues carrying delta, found by expansion in the left eigenbasis.
std::vector<std::complex<double>> support_by_eigenbasis(const ComplexVector &values,
                                                        const ComplexMatrix &vectors,
                                                        const Eigen::VectorXd &delta)
{
  ComplexVector const coeffs = vectors.fullPivLu().solve(delta.cast<std::complex<double>>());
  double const cutoff = 1e-9 * delta.norm();
  std::vector<std::complex<double>> support;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
    if (std::abs(coeffs(k)) * vectors.col(k).norm() > cutoff) {
      support.push_back(values(k));
    }
  }
  return support;
}

// Defective case: eigenvalue group g carries delta exactly when the product of
// (M^T - z_h)^{m_h} over the other groups h does not annihilate delta.
std::vector<std::complex<double>> support_by_annihilators(const Eigen::MatrixXd &mt,
                                                          const std::vector<EigenGroup> &groups,
                                                          const Eigen::VectorXd &delta)
{
  auto const n = mt.rows();
  ComplexMatrix const a = mt.cast<std::complex<double>>();
  ComplexMatrix const id = ComplexMatrix::Identity(n, n);
  std::vector<std::complex<double>> support;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    ComplexVector v = delta.cast<std::complex<double>>();
    double scale = delta.norm();
    for (std::size_t h = 0; h < groups.size(); ++h) {
      if (h == g) {
        continue;
      }
      ComplexMatrix const factor = a - groups[h].value * id;
      for (int k = 0; k < groups[h].multiplicity; ++k) {
        v = factor * v;
        scale *= std::max(1.0, factor.operatorNorm());
      }
    }
    if (v.norm() > 1e-9 * scale) {
      support.push_back(groups[g].value);
    }
  }
  return support;
}

} // namespace

LengthChangeDecomposition decompose_length_change(const LengthVector &from,
                                                  const LengthVector &to,
                                                  const SpectralData &spec)
{
  auto const n = static_cast<std::size_t>(spec.matrix.rows());
  check_lengths(from, n);
  check_lengths(to, n);
  LengthChangeDecomposition out;
  out.scale = spec.frequency.dot(to) / spec.frequency.dot(from);
  out.delta = to - out.scale * from;

  if (out.delta.norm() <= 1e-14 * to.norm() || n == 1) {
    out.delta.setZero();
    out.contracting = Contraction::Contracting;
    out.decay_rate = 0.0;
    return out;
  }

  Eigen::MatrixXd const mt = spec.matrix.cast<double>().transpose();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(mt, true);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("eigen decomposition of the substitution matrix failed");
  }
  ComplexVector const values = solver.eigenvalues();
  ComplexMatrix const vectors = solver.eigenvectors();
  // A Jordan block splits into a cluster of width ~sqrt(eps) with nearly
  // parallel eigenvectors, so any repeated eigenvalue leaves the eigenbasis.
  auto const groups = group_eigenvalues(values);

  if (groups.size() == n) {
    out.support = support_by_eigenbasis(values, vectors, out.delta);
  } else if (n <= 4) {
    out.support = support_by_annihilators(mt, groups, out.delta);
  } else {
    // No reliable eigenbasis; report the spectral bound without a verdict.
    out.contracting = Contraction::Indeterminate;
    out.decay_rate =
      spec.secondary_moduli.empty() ? 0.0 : spec.secondary_moduli.front();
    return out;
  }

  sort_by_modulus(out.support);
  out.decay_rate = out.support.empty() ? 0.0 : std::abs(out.support.front());
  if (out.decay_rate < 1.0 - contraction_margin) {
    out.contracting = Contraction::Contracting;
  } else if (out.decay_rate <= 1.0 + contraction_margin) {
    out.contracting = Contraction::Indeterminate;
  } else {
    out.contracting = Contraction::NotContracting;
  }
  return out;
}

double supertile_length(const Substitution &sub, Letter letter, unsigned n,
                        const LengthVector &lengths)
{
  check_lengths(lengths, sub.size());
  if (letter >= sub.size()) {
    throw InputError("letter outside the alphabet");
  }
  return supertile_lengths<double>(substitution_matrix(sub), n, lengths)(letter);
}

IntVector supertile_sizes(const IntMatrix &m, unsigned n)
{
  auto const k = m.rows();
  IntVector out = IntVector::Ones(k);
  for (unsigned level = 0; level < n; ++level) {
    IntVector next = IntVector::Zero(k);
    for (Eigen::Index j = 0; j < k; ++j) {
      for (Eigen::Index i = 0; i < k; ++i) {
        std::int64_t term = 0;
        if (__builtin_mul_overflow(m(i, j), out(i), &term) ||
            __builtin_add_overflow(next(j), term, &next(j))) {
          throw LimitError("supertile size overflows 64 bits at level " +
                           std::to_string(level + 1));
        }
      }
    }
    out = std::move(next);
  }
  return out;
}

} // namespace plastic
