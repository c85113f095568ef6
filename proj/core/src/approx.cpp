#include "xaitu/approx.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "xaitu/errors.hpp"
#include "xaitu/rng.hpp"

namespace xaitu::approx {

namespace {

using Clock = std::chrono::steady_clock;

void shuffle_in_place(std::vector<int>& perm, Rng& rng) {
  for (std::size_t i = perm.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(perm[i - 1], perm[j]);
  }
}

// C(n, s) capped at `cap` to avoid overflow; exact when below the cap.
std::uint64_t binomial_capped(int n, int s, std::uint64_t cap) {
  if (s < 0 || s > n) return 0;
  s = std::min(s, n - s);
  long double acc = 1.0L;
  for (int i = 1; i <= s; ++i) {
    acc = acc * static_cast<long double>(n - s + i) / static_cast<long double>(i);
    if (acc > static_cast<long double>(cap) * 2.0L)
      return cap + 1;
  }
  const long double rounded = std::floor(acc + 0.5L);
  if (rounded > static_cast<long double>(cap)) return cap + 1;
  return static_cast<std::uint64_t>(rounded);
}

}  // namespace

std::uint64_t default_permutation_budget(int n) {
  return static_cast<std::uint64_t>(2 * n + 1) * 10u;
}

std::uint64_t default_kernel_budget(int n) {
  const std::uint64_t linear = static_cast<std::uint64_t>(2 * n) + 2048u;
  if (n < 63) {
    const std::uint64_t full = std::uint64_t{1} << n;
    return std::min(full, linear);
  }
  return linear;
}

AttributionVector permutation_shap(Game& game, const ApproxConfig& cfg) {
  const int n = game.num_players();
  const std::uint64_t budget =
      cfg.budget != 0 ? cfg.budget : default_permutation_budget(n);
  if (budget < static_cast<std::uint64_t>(2 * n + 1))
    throw Error("permutation budget must be at least 2n+1");

  const auto start = Clock::now();
  const std::uint64_t evals0 = game.eval_count();
  const std::uint64_t calls0 = game.model_call_count();

  const std::uint64_t passes = budget / static_cast<std::uint64_t>(n + 1);
  std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(cfg.seed);

  for (std::uint64_t pass = 0; pass < passes; ++pass) {
    if (pass % 2 == 0)
      shuffle_in_place(perm, rng);
    else
      std::reverse(perm.begin(), perm.end());  // antithetic partner
    Coalition prefix = Coalition::empty();
    double prev = game.value(prefix);
    for (int j : perm) {
      prefix = prefix.plus(j);
      const double cur = game.value(prefix);
      acc[static_cast<std::size_t>(j)] += cur - prev;
      prev = cur;
    }
  }

  AttributionVector out;
  out.method = "PERMUTATION_SHAP";
  out.values.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    out.values[static_cast<std::size_t>(j)] =
        acc[static_cast<std::size_t>(j)] / static_cast<double>(passes);
  out.evals_used = game.eval_count() - evals0;
  out.model_calls = game.model_call_count() - calls0;
  out.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

namespace {

struct SampledCoalition {
  Coalition members;
  double weight;
};

// Enumerates coalition sizes from both ends (1, n-1, 2, n-2, ...); a size
// class that fits the remaining budget is enumerated completely, otherwise
// its Shapley kernel mass is split across `remaining` sampled members.
std::vector<SampledCoalition> sample_kernel_coalitions(int n,
                                                       std::uint64_t remaining,
                                                       Rng& rng) {
  std::vector<SampledCoalition> out;
  std::vector<int> size_order;
  for (int lo = 1, hi = n - 1; lo <= hi; ++lo, --hi) {
    size_order.push_back(lo);
    if (hi != lo) size_order.push_back(hi);
  }

  for (int s : size_order) {
    if (remaining == 0) break;
    const double class_mass =
        static_cast<double>(n - 1) / (static_cast<double>(s) * (n - s));
    const std::uint64_t class_count = binomial_capped(n, s, remaining);
    if (class_count <= remaining) {
      // full enumeration of the size class, lexicographic
      std::vector<int> comb(static_cast<std::size_t>(s));
      std::iota(comb.begin(), comb.end(), 0);
      const double w = class_mass / static_cast<double>(class_count);
      while (true) {
        out.push_back({Coalition::of(comb), w});
        int i = s - 1;
        while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - s + i) --i;
        if (i < 0) break;
        ++comb[static_cast<std::size_t>(i)];
        for (int k = i + 1; k < s; ++k)
          comb[static_cast<std::size_t>(k)] = comb[static_cast<std::size_t>(k - 1)] + 1;
      }
      remaining -= class_count;
    } else {
      // sample `remaining` distinct members of the class
      std::set<std::vector<int>> seen;
      std::vector<int> pool(static_cast<std::size_t>(n));
      std::iota(pool.begin(), pool.end(), 0);
      const std::uint64_t want = remaining;
      std::uint64_t attempts = 0;
      while (seen.size() < want && attempts < 200u * want) {
        ++attempts;
        for (int i = 0; i < s; ++i) {
          const std::size_t j = static_cast<std::size_t>(i) +
                                static_cast<std::size_t>(rng.below(
                                    static_cast<std::uint64_t>(n - i)));
          std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
        }
        std::vector<int> picked(pool.begin(), pool.begin() + s);
        std::sort(picked.begin(), picked.end());
        seen.insert(std::move(picked));
      }
      const double w = class_mass / static_cast<double>(seen.size());
      for (const auto& members : seen) out.push_back({Coalition::of(members), w});
      remaining = 0;
    }
  }
  return out;
}

}  // namespace

AttributionVector kernel_shap(Game& game, const ApproxConfig& cfg) {
  const int n = game.num_players();
  const std::uint64_t budget =
      cfg.budget != 0 ? cfg.budget : default_kernel_budget(n);
  if (budget < static_cast<std::uint64_t>(2 * n + 2))
    throw Error("kernel budget must be at least 2n+2");

  const auto start = Clock::now();
  const std::uint64_t evals0 = game.eval_count();
  const std::uint64_t calls0 = game.model_call_count();

  const double v_empty = game.value(Coalition::empty());
  const double v_grand = game.value(Coalition::full(n));
  const double total = v_grand - v_empty;

  AttributionVector out;
  out.method = "KERNEL_SHAP";
  out.values.assign(static_cast<std::size_t>(n), 0.0);

  if (n == 1) {
    out.values[0] = total;
  } else {
    Rng rng(cfg.seed);
    const auto sampled = sample_kernel_coalitions(n, budget - 2, rng);
    const auto m = static_cast<Eigen::Index>(sampled.size());
    const auto unknowns = static_cast<Eigen::Index>(n - 1);

    // Eliminate the last feature via the efficiency constraint, then solve
    // the weighted least squares in the remaining n-1 unknowns.
    Eigen::MatrixXd A(m, unknowns);
    Eigen::VectorXd b(m);
    for (Eigen::Index r = 0; r < m; ++r) {
      const auto& row = sampled[static_cast<std::size_t>(r)];
      const double sw = std::sqrt(row.weight);
      const double z_last = row.members.contains(n - 1) ? 1.0 : 0.0;
      for (int j = 0; j + 1 < n; ++j) {
        const double z = row.members.contains(j) ? 1.0 : 0.0;
        A(r, j) = sw * (z - z_last);
      }
      const double y = game.value(row.members);
      b(r) = sw * (y - v_empty - z_last * total);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (qr.rank() < unknowns)
      throw Error("insufficient coalition diversity; increase budget");
    const Eigen::VectorXd phi = qr.solve(b);
    double head_sum = 0.0;
    for (int j = 0; j + 1 < n; ++j) {
      out.values[static_cast<std::size_t>(j)] = phi(j);
      head_sum += phi(j);
    }
    out.values[static_cast<std::size_t>(n - 1)] = total - head_sum;
  }

  out.evals_used = game.eval_count() - evals0;
  out.model_calls = game.model_call_count() - calls0;
  out.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

AttributionVector estimate(Game& game, const ApproxConfig& cfg) {
  return cfg.method == ApproxConfig::Method::kernel ? kernel_shap(game, cfg)
                                                    : permutation_shap(game, cfg);
}

}  // namespace xaitu::approx
