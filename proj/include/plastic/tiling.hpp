#pragma once

// Suspension tilings of a substitution fixed sequence and the supertile maps
// psi_n between suspensions with different tile lengths.
//
// Tiles are half-open intervals [a, b); a point on a boundary belongs to the
// tile on its right. psi_n is defined on tilings whose sequence is a
// BiInfiniteSequence (the orbit of a substitution fixed point), where the
// level-n supertile partition is canonical.

#include "plastic/sequence.hpp"
#include "plastic/spectral.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace plastic {

/// A point (u, t) of the suspension: tile 0 carries letter u[shift] and
/// occupies [-offset, -offset + l(u[shift])). Construction normalizes the
/// offset into that range by moving along the sequence.
class Tiling
{
public:
  Tiling(SequenceHandle sequence, LengthVector lengths, std::int64_t shift = 0,
         double offset = 0.0);

  const SequenceHandle &sequence() const { return sequence_; }
  const LengthVector &lengths() const { return lengths_; }
  std::int64_t shift() const { return shift_; }
  double offset() const { return offset_; }

  /// Letter of tile k (tile 0 contains the origin).
  Letter letter(std::int64_t k) const { return sequence_->at(shift_ + k); }
  double tile_length(std::int64_t k) const { return lengths_(letter(k)); }

  bool same_point(const Tiling &other) const;

private:
  SequenceHandle sequence_;
  LengthVector lengths_;
  std::int64_t shift_;
  double offset_;
};

Tiling suspend(SequenceHandle sequence, const LengthVector &lengths, double t);

/// T - x: the same tiling seen from the point x, so that x becomes the origin.
Tiling translate(const Tiling &tiling, double x);

struct TileHit
{
  std::int64_t index = 0;
  Letter letter = 0;
  double start = 0.0;
  double end = 0.0;
};

TileHit tile_at(const Tiling &tiling, double x);

/// Same sequence, same lengths: returns tau with b = a - tau (b is a seen
/// from tau). Empty when the tilings are not translates in this sense.
std::optional<double> relative_translation(const Tiling &a, const Tiling &b);

/// Geometric grid 10^(-12 + k/20), k = 0..240.
std::vector<double> default_distance_grid();

/// Smallest grid value eps such that, on [-1/eps, 1/eps], the tiles of both
/// tilings correspond one to one with equal labels and every pair of
/// corresponding boundaries differs by at most eps. Capped at 1. Grid values
/// whose window would exceed max_radius are skipped. For pure translates by
/// tau the aligned match gives exactly min(|tau|, 1) without a window scan.
double tiling_distance(const Tiling &a, const Tiling &b,
                       const std::vector<double> &grid = default_distance_grid(),
                       double max_radius = 1e5);

struct SupertileAddress
{
  unsigned level = 0;
  std::int64_t start_index = 0; // tile index (relative to tile 0) where the supertile begins
  Letter seed_letter = 0;
  std::int64_t size = 0; // |sigma^level(seed_letter)|
  double fraction = 0.0; // origin position across the supertile, in [0, 1)
};

SupertileAddress supertile_address(const Tiling &tiling, unsigned level);

/// Same sequence with lengths `to`, positioned so the level-n supertile
/// containing the origin keeps the same fractional position.
Tiling psi_n(const Tiling &tiling, const LengthVector &to, unsigned level);

struct ConjugacyLevel
{
  unsigned level = 0;
  std::int64_t shift = 0;
  double offset = 0.0; // canonical offset of psi_level
  double gap = 0.0;    // translation distance between psi_level and psi_{level+1}
  double discrepancy = 0.0; // max over letters of |L'_{level+1} - L_{level+1}|
};

struct ConjugacyTrace
{
  double scale = 1.0; // overall rescaling removed from the target lengths
  LengthVector matched; // target lengths divided by scale
  double decay_rate = 0.0;
  std::vector<ConjugacyLevel> levels;
  bool converged = false;
  unsigned converged_level = 0;
  std::optional<Tiling> limit;
  /// exp of the least-squares slope of log(max_{k >= n} gap_k) against n over
  /// the fitting window, 0 when fewer than two levels are available.
  double fitted_rate = 0.0;
};

struct ConjugacyOptions
{
  double tolerance = 1e-9;
  unsigned max_level = 60;
  unsigned fit_from = 5;
  unsigned fit_to = 15;
};

/// Iterates psi_n on the mean-matched target lengths and stops at the first
/// level where both the gap and the next level's supertile length discrepancy
/// fall below the tolerance. A small gap alone is not enough: when the origin
/// sits on a level-k supertile boundary the first k gaps are exactly zero.
/// Throws PreconditionError when the length change is not contracting and
/// ConvergenceError when max_level is reached.
ConjugacyTrace conjugacy(const Tiling &tiling, const LengthVector &to,
                         const ConjugacyOptions &options = {});

/// Least-squares rate over the fitting window of a gap sequence (see
/// ConjugacyTrace::fitted_rate).
double fitted_gap_rate(const std::vector<ConjugacyLevel> &levels, unsigned from, unsigned to);

/// Rate of the level-wise mean of log(max_{k >= n} gap_k) across several
/// traces, over the fitting window. Single traces carry origin-dependent
/// phase noise (a gap vanishes whenever the next supertile repeats the
/// current one); averaging over origins removes it.
double pooled_gap_rate(const std::vector<ConjugacyTrace> &traces, unsigned from, unsigned to);

/// `count` points of the suspension with tile index drawn uniformly from
/// [index_lo, index_hi] and offset uniform across that tile. Deterministic in
/// `seed` on every platform.
std::vector<Tiling> sample_origins(const SequenceHandle &sequence, const LengthVector &lengths,
                                   unsigned count, std::uint64_t seed,
                                   std::int64_t index_lo = 100000,
                                   std::int64_t index_hi = 1000000);

/// max over samples s of tiling_distance(psi(T - s), psi(T) - s), with s
/// evenly spaced over [-span, span].
double equivariance_residual(const Tiling &tiling, const LengthVector &to,
                             const ConjugacyOptions &options, unsigned samples,
                             double span = 10.0);

} // namespace plastic
