#include "xaitu/coalition.hpp"

#include <algorithm>
#include <bit>

#include "xaitu/errors.hpp"

namespace xaitu {

Coalition Coalition::full(int n) {
  Coalition s;
  s.members_.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) s.members_[static_cast<std::size_t>(j)] = j;
  return s;
}

Coalition Coalition::of(std::vector<int> members) {
  std::sort(members.begin(), members.end());
  if (!members.empty() && members.front() < 0)
    throw Error("coalition members must be non-negative indices");
  if (std::adjacent_find(members.begin(), members.end()) != members.end())
    throw Error("coalition members must be distinct");
  Coalition s;
  s.members_ = std::move(members);
  return s;
}

Coalition Coalition::from_mask(std::uint64_t mask) {
  Coalition s;
  s.members_.reserve(static_cast<std::size_t>(std::popcount(mask)));
  while (mask != 0) {
    const int j = std::countr_zero(mask);
    s.members_.push_back(j);
    mask &= mask - 1;
  }
  return s;
}

bool Coalition::contains(int j) const {
  return std::binary_search(members_.begin(), members_.end(), j);
}

Coalition Coalition::plus(int j) const {
  if (contains(j)) return *this;
  Coalition s(*this);
  s.members_.insert(std::lower_bound(s.members_.begin(), s.members_.end(), j), j);
  return s;
}

Coalition Coalition::minus(int j) const {
  if (!contains(j)) return *this;
  Coalition s(*this);
  s.members_.erase(std::lower_bound(s.members_.begin(), s.members_.end(), j));
  return s;
}

std::uint64_t Coalition::mask() const {
  std::uint64_t m = 0;
  for (int j : members_) {
    if (j >= 64) throw Error("bitmask view requires all members < 64");
    m |= (1ull << j);
  }
  return m;
}

}  // namespace xaitu
