#include "plastic/sequence.hpp"

#include "plastic/errors.hpp"

namespace plastic {

BiInfiniteSequence::BiInfiniteSequence(Substitution sub, BiInfiniteSeed seed, std::size_t budget)
  : sub_(std::move(sub)), seed_(seed), budget_(budget), right_{seed.right}, left_{seed.left}
{
  require_primitive(sub_);
  auto const pk = apply_power(sub_, Word{seed_.left}, seed_.power);
  auto const sk = apply_power(sub_, Word{seed_.right}, seed_.power);
  if (pk.back() != seed_.left || sk.front() != seed_.right) {
    throw InputError("seed is not fixed by the stated power of the substitution");
  }
  if (!is_factor(sub_, Word{seed_.left, seed_.right})) {
    throw InputError("seed pair is not a factor of the language");
  }
}

std::shared_ptr<const BiInfiniteSequence> BiInfiniteSequence::of(const Substitution &sub)
{
  return std::make_shared<const BiInfiniteSequence>(sub, biinfinite_seed(sub));
}

void BiInfiniteSequence::grow_to(std::int64_t lo, std::int64_t hi) const
{
  // Caller holds the mutex.
  while (static_cast<std::int64_t>(right_.size()) < hi) {
    Word next = apply_power(sub_, right_, seed_.power);
    if (next.size() <= right_.size() || next.size() > budget_) {
      throw LimitError("sequence window budget of " + std::to_string(budget_) +
                       " letters exceeded");
    }
    right_ = std::move(next);
  }
  while (-static_cast<std::int64_t>(left_.size()) > lo) {
    Word next = apply_power(sub_, left_, seed_.power);
    if (next.size() <= left_.size() || next.size() > budget_) {
      throw LimitError("sequence window budget of " + std::to_string(budget_) +
                       " letters exceeded");
    }
    left_ = std::move(next);
  }
}

Letter BiInfiniteSequence::at(std::int64_t i) const
{
  std::lock_guard lock(mutex_);
  grow_to(i, i + 1);
  if (i >= 0) {
    return right_[static_cast<std::size_t>(i)];
  }
  return left_[left_.size() - static_cast<std::size_t>(-i)];
}

Word BiInfiniteSequence::window(std::int64_t lo, std::int64_t hi) const
{
  Word out;
  if (hi <= lo) {
    return out;
  }
  std::lock_guard lock(mutex_);
  grow_to(lo, hi);
  out.reserve(static_cast<std::size_t>(hi - lo));
  for (std::int64_t i = lo; i < hi; ++i) {
    out.push_back(i >= 0 ? right_[static_cast<std::size_t>(i)]
                         : left_[left_.size() - static_cast<std::size_t>(-i)]);
  }
  return out;
}

} // namespace plastic
