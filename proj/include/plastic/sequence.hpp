#pragma once

#include "plastic/symbolic.hpp"

#include <cstdint>
#include <memory>
#include <mutex>

namespace plastic {

/// The bi-infinite fixed sequence ...sigma^{kj}(p) . sigma^{kj}(s)... grown on
/// demand. Index 0 is the first letter of the right half, index -1 the last
/// letter of the left half. The grown halves are a memo: every read sees the
/// same letters no matter how far the window has grown.
class BiInfiniteSequence
{
public:
  static constexpr std::size_t default_budget = std::size_t{1} << 28;

  BiInfiniteSequence(Substitution sub, BiInfiniteSeed seed, std::size_t budget = default_budget);

  /// Fixed sequence seeded by biinfinite_seed(sub).
  static std::shared_ptr<const BiInfiniteSequence> of(const Substitution &sub);

  const Substitution &substitution() const { return sub_; }
  const BiInfiniteSeed &seed() const { return seed_; }

  Letter at(std::int64_t i) const;
  /// Letters with indices in [lo, hi).
  Word window(std::int64_t lo, std::int64_t hi) const;

private:
  void grow_to(std::int64_t lo, std::int64_t hi) const;

  Substitution sub_;
  BiInfiniteSeed seed_;
  std::size_t budget_;
  mutable std::mutex mutex_;
  mutable Word right_; // indices 0, 1, ...
  mutable Word left_;  // indices -|left_|, ..., -1
};

using SequenceHandle = std::shared_ptr<const BiInfiniteSequence>;

} // namespace plastic
