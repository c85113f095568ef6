#ifndef XAITU_APPROX_HPP
#define XAITU_APPROX_HPP

#include <cstdint>

#include "xaitu/attribution.hpp"
#include "xaitu/game.hpp"

namespace xaitu::approx {

/// Sampling configuration. The budget counts characteristic-function
/// evaluations (one per composed coalition, duplicates included); it must be
/// at least 2n+2 for kernel and 2n+1 for permutation.
struct ApproxConfig {
  enum class Method { kernel, permutation };
  Method method = Method::permutation;
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;  // 0 => method default for the game's n
};

/// The experiments' comparability budget: (2n+1) * 10.
std::uint64_t default_permutation_budget(int n);
/// min(2^n, 2n + 2048); no canonical experiment budget exists.
std::uint64_t default_kernel_budget(int n);

/// Marginal contributions averaged over whole sampled permutations,
/// floor(budget/(n+1)) forward passes drawn in antithetic (forward,
/// reversed) pairs. Each full pass telescopes, so efficiency holds per pass.
AttributionVector permutation_shap(Game& game, const ApproxConfig& cfg);

/// Shapley-kernel weighted least squares over coalitions enumerated from
/// both size ends until the budget is filled, with the efficiency constraint
/// imposed exactly by variable elimination (no penalty term).
AttributionVector kernel_shap(Game& game, const ApproxConfig& cfg);

AttributionVector estimate(Game& game, const ApproxConfig& cfg);

}  // namespace xaitu::approx

#endif
