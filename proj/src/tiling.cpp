#include "plastic/tiling.hpp"

#include "plastic/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace plastic {

namespace {

bool same_sequence(const SequenceHandle &a, const SequenceHandle &b)
{
  return a == b || (a->seed() == b->seed() && a->substitution() == b->substitution());
}

// Level-by-level supertile sizes and lengths for one substitution.
class Hierarchy
{
public:
  explicit Hierarchy(const BiInfiniteSequence &seq)
    : sub_(seq.substitution()), seed_(seq.seed()), matrix_(substitution_matrix(sub_))
  {
    sizes_.push_back(IntVector::Ones(matrix_.rows()));
  }

  const IntVector &sizes(unsigned level)
  {
    while (sizes_.size() <= level) {
      auto const &prev = sizes_.back();
      IntVector next = IntVector::Zero(prev.size());
      for (Eigen::Index j = 0; j < matrix_.cols(); ++j) {
        for (Eigen::Index i = 0; i < matrix_.rows(); ++i) {
          std::int64_t term = 0;
          if (__builtin_mul_overflow(matrix_(i, j), prev(i), &term) ||
              __builtin_add_overflow(next(j), term, &next(j))) {
            throw LimitError("supertile size overflows 64 bits at level " +
                             std::to_string(sizes_.size()));
          }
        }
      }
      sizes_.push_back(std::move(next));
    }
    return sizes_[level];
  }

  const Substitution &sub() const { return sub_; }
  const IntMatrix &matrix() const { return matrix_; }

  struct Block
  {
    std::int64_t start = 0; // sequence index
    Letter letter = 0;
  };

  // The level-n supertile of the fixed sequence containing sequence index i.
  Block locate(std::int64_t i, unsigned n)
  {
    unsigned top = seed_.power * ((n + seed_.power - 1) / seed_.power);
    Letter const root = i >= 0 ? seed_.right : seed_.left;
    auto covers = [&](unsigned level) {
      auto const size = sizes(level)(root);
      return i >= 0 ? i < size : -i <= size;
    };
    while (!covers(top)) {
      top += seed_.power;
    }
    Block b{i >= 0 ? 0 : -sizes(top)(root), root};
    return descend(b, top, n, [&](Letter, std::int64_t start, std::int64_t size) {
      return i < start + size;
    });
  }

  // Walk from a level-`from` block down to level `to`, choosing at each level
  // the first child for which pick(child, child_start, child_size) holds.
  template <typename Pick>
  Block descend(Block b, unsigned from, unsigned to, Pick pick)
  {
    for (unsigned level = from; level > to; --level) {
      auto const &child_sizes = sizes(level - 1);
      auto const &img = sub_.image(b.letter);
      std::int64_t start = b.start;
      Block next{start, img.back()};
      bool found = false;
      for (Letter d : img) {
        if (pick(d, start, child_sizes(d))) {
          next = Block{start, d};
          found = true;
          break;
        }
        start += child_sizes(d);
      }
      if (!found) {
        next = Block{start - child_sizes(img.back()), img.back()};
      }
      b = next;
    }
    return b;
  }

private:
  Substitution sub_;
  BiInfiniteSeed seed_;
  IntMatrix matrix_;
  std::vector<IntVector> sizes_;
};

std::vector<Eigen::VectorXd> length_table(const IntMatrix &m, const LengthVector &lengths,
                                          unsigned levels)
{
  std::vector<Eigen::VectorXd> out{lengths};
  Eigen::MatrixXd const mt = m.cast<double>().transpose();
  for (unsigned k = 0; k < levels; ++k) {
    out.push_back(mt * out.back());
  }
  return out;
}

} // namespace

Tiling::Tiling(SequenceHandle sequence, LengthVector lengths, std::int64_t shift, double offset)
  : sequence_(std::move(sequence)), lengths_(std::move(lengths)), shift_(shift), offset_(offset)
{
  if (!sequence_) {
    throw InputError("tiling needs a sequence");
  }
  check_lengths(lengths_, sequence_->substitution().size());
  if (!std::isfinite(offset_)) {
    throw InputError("tiling offset must be finite");
  }
  // (u, t) ~ (shifted u, t - l(u_0)).
  while (offset_ < 0.0) {
    --shift_;
    offset_ += lengths_(sequence_->at(shift_));
  }
  for (;;) {
    double const len = lengths_(sequence_->at(shift_));
    if (offset_ < len) {
      break;
    }
    offset_ -= len;
    ++shift_;
  }
}

bool Tiling::same_point(const Tiling &other) const
{
  return same_sequence(sequence_, other.sequence_) && lengths_ == other.lengths_ &&
         shift_ == other.shift_ && offset_ == other.offset_;
}

Tiling suspend(SequenceHandle sequence, const LengthVector &lengths, double t)
{
  return Tiling(std::move(sequence), lengths, 0, t);
}

Tiling translate(const Tiling &tiling, double x)
{
  return Tiling(tiling.sequence(), tiling.lengths(), tiling.shift(), tiling.offset() + x);
}

namespace {

// Left endpoint of tile k of t.
double tile_start(const Tiling &t, std::int64_t k)
{
  double x = -t.offset();
  if (k >= 0) {
    for (std::int64_t j = 0; j < k; ++j) {
      x += t.tile_length(j);
    }
  } else {
    for (std::int64_t j = k; j < 0; ++j) {
      x -= t.tile_length(j);
    }
  }
  return x;
}

} // namespace

TileHit tile_at(const Tiling &tiling, double x)
{
  std::int64_t k = 0;
  double start = -tiling.offset();
  double end = start + tiling.tile_length(0);
  while (x >= end) {
    ++k;
    start = end;
    end = start + tiling.tile_length(k);
  }
  while (x < start) {
    --k;
    end = start;
    start = end - tiling.tile_length(k);
  }
  return TileHit{k, tiling.letter(k), start, end};
}

std::optional<double> relative_translation(const Tiling &a, const Tiling &b)
{
  if (!same_sequence(a.sequence(), b.sequence()) || a.lengths() != b.lengths()) {
    return std::nullopt;
  }
  return tile_start(a, b.shift() - a.shift()) + b.offset();
}

std::vector<double> default_distance_grid()
{
  std::vector<double> grid;
  for (int k = 0; k <= 240; ++k) {
    grid.push_back(std::pow(10.0, -12.0 + k / 20.0));
  }
  return grid;
}

namespace {

// Tiles of a, starting from its tile at the origin, matched against tiles of
// b anchored at tile jb; checked on [-radius, radius].
bool matches_from(const Tiling &a, const Tiling &b, std::int64_t jb, double eps, double radius)
{
  auto const hit = tile_at(a, 0.0);
  double const b_start = tile_start(b, jb);
  if (std::abs(b_start - hit.start) > eps) {
    return false;
  }
  // Rightwards: labels and right endpoints.
  {
    double ea = hit.start, eb = b_start;
    for (std::int64_t k = 0;; ++k) {
      if (ea >= radius && eb >= radius) {
        break;
      }
      if (a.letter(hit.index + k) != b.letter(jb + k)) {
        return false;
      }
      ea += a.tile_length(hit.index + k);
      eb += b.tile_length(jb + k);
      if ((ea <= radius || eb <= radius) && std::abs(ea - eb) > eps) {
        return false;
      }
    }
  }
  // Leftwards: labels and left endpoints.
  {
    double sa = hit.start, sb = b_start;
    for (std::int64_t k = 1;; ++k) {
      if (sa <= -radius && sb <= -radius) {
        break;
      }
      if (a.letter(hit.index - k) != b.letter(jb - k)) {
        return false;
      }
      sa -= a.tile_length(hit.index - k);
      sb -= b.tile_length(jb - k);
      if ((sa >= -radius || sb >= -radius) && std::abs(sa - sb) > eps) {
        return false;
      }
    }
  }
  return true;
}

bool close_one_way(const Tiling &a, const Tiling &b, double eps, double radius)
{
  auto const ha = tile_at(a, 0.0);
  auto const hb = tile_at(b, ha.start);
  for (std::int64_t d : {0, 1, -1}) {
    if (matches_from(a, b, hb.index + d, eps, radius)) {
      return true;
    }
  }
  return false;
}

} // namespace

double tiling_distance(const Tiling &a, const Tiling &b, const std::vector<double> &grid,
                       double max_radius)
{
  if (a.sequence()->substitution().alphabet() != b.sequence()->substitution().alphabet()) {
    throw InputError("tilings use different alphabets");
  }
  if (a.same_point(b)) {
    return 0.0;
  }
  // Pure translate: every boundary moves by exactly |tau|, so only a
  // misaligned match at a coarser radius can come closer.
  double bound = 1.0;
  if (auto tau = relative_translation(a, b)) {
    bound = std::min(1.0, std::abs(*tau));
  }
  for (double eps : grid) {
    if (eps >= bound) {
      break;
    }
    double const radius = 1.0 / eps;
    if (radius > max_radius) {
      continue;
    }
    if (close_one_way(a, b, eps, radius) && close_one_way(b, a, eps, radius)) {
      return eps;
    }
  }
  return bound;
}

namespace {

struct Located
{
  Hierarchy::Block block;      // sequence index and letter of the supertile
  double prefix_length = 0.0;  // length of its tiles before the origin tile
  double total_length = 0.0;
  std::int64_t size = 0;
};

Located locate_origin(Hierarchy &h, const Tiling &tiling, unsigned level)
{
  auto const i = tiling.shift();
  auto const block = h.locate(i, level);
  auto const table = length_table(h.matrix(), tiling.lengths(), level);
  Located out{block, 0.0, table[level](block.letter), h.sizes(level)(block.letter)};
  // Lengths of the children skipped on the way down to tile i.
  Hierarchy::Block b = block;
  for (unsigned m = level; m > 0; --m) {
    auto const &child_sizes = h.sizes(m - 1);
    std::int64_t start = b.start;
    for (Letter d : h.sub().image(b.letter)) {
      if (i < start + child_sizes(d)) {
        b = Hierarchy::Block{start, d};
        break;
      }
      out.prefix_length += table[m - 1](d);
      start += child_sizes(d);
    }
  }
  return out;
}

} // namespace

SupertileAddress supertile_address(const Tiling &tiling, unsigned level)
{
  Hierarchy h(*tiling.sequence());
  auto const loc = locate_origin(h, tiling, level);
  SupertileAddress a;
  a.level = level;
  a.start_index = loc.block.start - tiling.shift();
  a.seed_letter = loc.block.letter;
  a.size = loc.size;
  a.fraction = (loc.prefix_length + tiling.offset()) / loc.total_length;
  if (a.fraction >= 1.0) {
    a.fraction = std::nextafter(1.0, 0.0);
  }
  return a;
}

Tiling psi_n(const Tiling &tiling, const LengthVector &to, unsigned level)
{
  check_lengths(to, tiling.sequence()->substitution().size());
  Hierarchy h(*tiling.sequence());
  auto const loc = locate_origin(h, tiling, level);
  double const fraction = (loc.prefix_length + tiling.offset()) / loc.total_length;
  auto const table = length_table(h.matrix(), to, level);
  // Place the origin at fraction * L' inside the supertile and find its tile.
  double q = fraction * table[level](loc.block.letter);
  Hierarchy::Block b = loc.block;
  for (unsigned m = level; m > 0; --m) {
    auto const &child_sizes = h.sizes(m - 1);
    auto const &img = h.sub().image(b.letter);
    std::int64_t start = b.start;
    for (std::size_t c = 0; c < img.size(); ++c) {
      Letter const d = img[c];
      double const len = table[m - 1](d);
      if (q < len || c + 1 == img.size()) {
        b = Hierarchy::Block{start, d};
        break;
      }
      q -= len;
      start += child_sizes(d);
    }
  }
  return Tiling(tiling.sequence(), to, b.start, std::max(q, 0.0));
}

namespace {

// Mean of log(max_{k >= n} gap_k) per level n in [from, to], over traces.
// Levels where any trace has a zero envelope are dropped.
std::vector<std::pair<double, double>> log_envelopes(const std::vector<ConjugacyTrace> &traces,
                                                     unsigned from, unsigned to)
{
  std::vector<std::pair<double, double>> points;
  for (unsigned n = from; n <= to; ++n) {
    double sum = 0.0;
    bool usable = !traces.empty();
    for (auto const &trace : traces) {
      double envelope = 0.0;
      bool present = false;
      for (auto const &l : trace.levels) {
        if (l.level >= n) {
          envelope = std::max(envelope, l.gap);
          present = present || l.level == n;
        }
      }
      if (!present || envelope <= 0.0) {
        usable = false;
        break;
      }
      sum += std::log(envelope);
    }
    if (usable) {
      points.emplace_back(static_cast<double>(n), sum / static_cast<double>(traces.size()));
    }
  }
  return points;
}

double exp_slope(const std::vector<std::pair<double, double>> &points)
{
  if (points.size() < 2) {
    return 0.0;
  }
  double mx = 0.0, my = 0.0;
  for (auto const &[x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(points.size());
  my /= static_cast<double>(points.size());
  double sxy = 0.0, sxx = 0.0;
  for (auto const &[x, y] : points) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  return std::exp(sxy / sxx);
}

} // namespace

double fitted_gap_rate(const std::vector<ConjugacyLevel> &levels, unsigned from, unsigned to)
{
  ConjugacyTrace one;
  one.levels = levels;
  return exp_slope(log_envelopes({one}, from, to));
}

double pooled_gap_rate(const std::vector<ConjugacyTrace> &traces, unsigned from, unsigned to)
{
  return exp_slope(log_envelopes(traces, from, to));
}

std::vector<Tiling> sample_origins(const SequenceHandle &sequence, const LengthVector &lengths,
                                   unsigned count, std::uint64_t seed, std::int64_t index_lo,
                                   std::int64_t index_hi)
{
  if (index_hi < index_lo) {
    throw InputError("empty origin index range");
  }
  std::mt19937_64 rng(seed);
  auto const span = static_cast<std::uint64_t>(index_hi - index_lo) + 1;
  std::vector<Tiling> out;
  for (unsigned k = 0; k < count; ++k) {
    auto const index = index_lo + static_cast<std::int64_t>(rng() % span);
    double const u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    double const len = lengths(sequence->at(index));
    out.emplace_back(sequence, lengths, index, u * len);
  }
  return out;
}

ConjugacyTrace conjugacy(const Tiling &tiling, const LengthVector &to,
                         const ConjugacyOptions &options)
{
  auto const &sub = tiling.sequence()->substitution();
  check_lengths(to, sub.size());
  auto const spec = perron_data(substitution_matrix(sub));
  auto const dec = decompose_length_change(tiling.lengths(), to, spec);
  if (dec.contracting != Contraction::Contracting) {
    std::ostringstream msg;
    msg << "length change is " << to_string(dec.contracting)
        << ": it is carried by an eigenvalue of modulus " << dec.decay_rate;
    throw PreconditionError(msg.str());
  }
  ConjugacyTrace trace;
  trace.scale = dec.scale;
  trace.matched = to / dec.scale;
  trace.decay_rate = dec.decay_rate;

  // Supertile length discrepancies (M^T)^n (matched - lengths), kept on the
  // invariant complement of the Perron direction so that rounding does not grow.
  Eigen::MatrixXd const mt = spec.matrix.cast<double>().transpose();
  double const pairing = spec.frequency.dot(spec.left_perron);
  Eigen::VectorXd d = trace.matched - tiling.lengths();
  auto advance = [&] {
    d = mt * d;
    d -= (spec.frequency.dot(d) / pairing) * spec.left_perron;
  };
  advance();

  Tiling current = psi_n(tiling, trace.matched, 0);
  for (unsigned n = 0; n <= options.max_level; ++n) {
    Tiling next = psi_n(tiling, trace.matched, n + 1);
    double const gap = std::abs(*relative_translation(current, next));
    double const discrepancy = d.cwiseAbs().maxCoeff();
    trace.levels.push_back({n, current.shift(), current.offset(), gap, discrepancy});
    if (gap < options.tolerance && discrepancy < options.tolerance) {
      trace.converged = true;
      trace.converged_level = n;
      trace.limit = next;
      break;
    }
    current = std::move(next);
    advance();
  }
  trace.fitted_rate = fitted_gap_rate(trace.levels, options.fit_from, options.fit_to);
  if (!trace.converged) {
    std::ostringstream msg;
    msg << "psi_n did not converge by level " << options.max_level << "; gaps:";
    for (auto const &l : trace.levels) {
      msg << ' ' << l.gap;
    }
    throw ConvergenceError(msg.str());
  }
  return trace;
}

double equivariance_residual(const Tiling &tiling, const LengthVector &to,
                             const ConjugacyOptions &options, unsigned samples, double span)
{
  auto const base = conjugacy(tiling, to, options);
  double worst = 0.0;
  for (unsigned k = 0; k < samples; ++k) {
    double const s = -span + 2.0 * span * (static_cast<double>(k) + 0.5) / samples;
    auto const moved = conjugacy(translate(tiling, s), to, options);
    worst = std::max(worst, tiling_distance(*moved.limit, translate(*base.limit, s)));
  }
  return worst;
}

} // namespace plastic
