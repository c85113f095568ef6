#ifndef XAITU_TEST_HELPERS_HPP
#define XAITU_TEST_HELPERS_HPP

#include <cmath>
#include <vector>

#include "xaitu/rng.hpp"
#include "xaitu/snapshot.hpp"

namespace xaitu::test {

inline bool close(double a, double b, double rel = 1e-9, double abs = 1e-12) {
  if (std::isnan(a) || std::isnan(b)) return false;
  const double gap = std::abs(a - b);
  return gap <= abs || gap <= rel * std::max(std::abs(a), std::abs(b));
}

inline bool close_all(const std::vector<double>& a, const std::vector<double>& b,
                      double rel = 1e-9, double abs = 1e-12) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!close(a[i], b[i], rel, abs)) return false;
  return true;
}

/// The two-player game with v(empty)=0, v(1)=-3, v(2)=2, v(12)=1.
inline GameSnapshot order_reversal_game() {
  return GameSnapshot::full_game(2, {0.0, -3.0, 2.0, 1.0}, "hand:order-reversal");
}

/// The blow-up game v(empty)=0, v(1)=10, v(2)=-9, v(12)=15.
inline GameSnapshot blow_up_game() {
  return GameSnapshot::full_game(2, {0.0, 10.0, -9.0, 15.0}, "hand:blow-up");
}

/// Four players, player 4 (index 3) null; the grand base coalition is worth 6
/// while all smaller base coalitions are worth 0. The plain ES/ENSC mixture
/// hands the null player a share of the residual here.
inline GameSnapshot null_violation_game() {
  std::vector<double> v(16, 0.0);
  const auto set = [&v](unsigned mask, double value) { v[mask] = value; };
  set(0b0111, 6.0);  // {1,2,3}
  set(0b1111, 6.0);  // {1,2,3,4} = null extension
  return GameSnapshot::full_game(4, std::move(v), "hand:null-violation");
}

inline GameSnapshot random_game(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(std::size_t{1} << n);
  for (double& x : v) x = rng.uniform(-10.0, 10.0);
  return GameSnapshot::full_game(n, std::move(v), "test:random");
}

}  // namespace xaitu::test

#endif
