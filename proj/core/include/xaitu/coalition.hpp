#ifndef XAITU_COALITION_HPP
#define XAITU_COALITION_HPP

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace xaitu {

/// A coalition of players (features), canonically a strictly increasing list
/// of 0-based indices. For games with n <= 64 players a bitmask view is
/// available as the fast cache key.
class Coalition {
 public:
  Coalition() = default;

  static Coalition empty() { return Coalition(); }
  static Coalition full(int n);
  static Coalition single(int j) { return Coalition({j}); }
  /// Builds from arbitrary member order; sorts and rejects duplicates and
  /// negative indices.
  static Coalition of(std::vector<int> members);
  Coalition(std::initializer_list<int> members)
      : Coalition(of(std::vector<int>(members))) {}
  static Coalition from_mask(std::uint64_t mask);

  int size() const { return static_cast<int>(members_.size()); }
  bool is_empty() const { return members_.empty(); }
  bool contains(int j) const;
  const std::vector<int>& members() const { return members_; }

  /// Coalition with player j added (no-op if present).
  Coalition plus(int j) const;
  /// Coalition with player j removed (no-op if absent).
  Coalition minus(int j) const;

  /// Bitmask view; requires all members < 64.
  std::uint64_t mask() const;

  bool operator==(const Coalition&) const = default;
  auto operator<=>(const Coalition&) const = default;

 private:
  std::vector<int> members_;
};

struct CoalitionHash {
  std::size_t operator()(const Coalition& s) const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (int j : s.members()) {
      h ^= static_cast<std::size_t>(j) + 0x9e3779b9u;
      h *= 0x100000001b3ull;
    }
    return h;
  }
};

}  // namespace xaitu

#endif
