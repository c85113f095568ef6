#include "xaitu/rules.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <limits>

#include "xaitu/errors.hpp"

namespace xaitu::rules {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Meter {
  Game& game;
  Clock::time_point start = Clock::now();
  std::uint64_t evals0, calls0;

  explicit Meter(Game& g)
      : game(g), evals0(g.eval_count()), calls0(g.model_call_count()) {}

  void finish(AttributionVector& out) const {
    out.evals_used = game.eval_count() - evals0;
    out.model_calls = game.model_call_count() - calls0;
    out.elapsed_seconds =
        std::chrono::duration<double>(Clock::now() - start).count();
  }
};

AttributionVector zero_vector(int n, RuleId rule) {
  AttributionVector out;
  out.method = std::string(to_string(rule));
  out.values.assign(static_cast<std::size_t>(n), 0.0);
  return out;
}

// Per-feature marginals against the empty coalition: v(j) - v(empty).
std::vector<double> baseline_marginals(Game& game, double v_empty) {
  const int n = game.num_players();
  std::vector<double> m(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    m[static_cast<std::size_t>(j)] = game.value(Coalition::single(j)) - v_empty;
  return m;
}

// Per-feature marginals against the grand coalition: v(N) - v(N \ j).
std::vector<double> grand_marginals(Game& game, double v_grand) {
  const int n = game.num_players();
  const Coalition grand = Coalition::full(n);
  std::vector<double> m(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    m[static_cast<std::size_t>(j)] = v_grand - game.value(grand.minus(j));
  return m;
}

double sum(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s;
}

double null_tolerance(double total, const Options& opts) {
  return opts.zero_tol_scale * std::max(1.0, std::abs(total));
}

}  // namespace

// ---------------------------------------------------------------------------
// Exact SHAP by power-set enumeration

AttributionVector exact_shap(Game& game, const Options& opts) {
  const int n = game.num_players();
  if (n > kExactShapMaxPlayers && !opts.force_exact)
    throw GuardError("exact SHAP refused for n > 25 (use force to override)");
  if (n > 63) throw GuardError("exact SHAP enumeration requires n <= 63");

  Meter meter(game);
  AttributionVector out = zero_vector(n, RuleId::SHAP);

  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<double> v(count);
  for (std::uint64_t mask = 0; mask < count; ++mask)
    v[static_cast<std::size_t>(mask)] = game.value(mask);

  // w[s] = s!(n-s-1)!/n!, built by the ratio recurrence to stay in range
  std::vector<double> w(static_cast<std::size_t>(n));
  w[0] = 1.0 / static_cast<double>(n);
  for (int s = 0; s + 1 < n; ++s)
    w[static_cast<std::size_t>(s + 1)] =
        w[static_cast<std::size_t>(s)] * (s + 1) / static_cast<double>(n - s - 1);

  // the all-ones mask has no player left to add, so it never indexes w
  for (std::uint64_t mask = 0; mask + 1 < count; ++mask) {
    const double base = v[static_cast<std::size_t>(mask)];
    const double weight = w[static_cast<std::size_t>(std::popcount(mask))];
    for (int j = 0; j < n; ++j) {
      const std::uint64_t bit = std::uint64_t{1} << j;
      if (mask & bit) continue;
      out.values[static_cast<std::size_t>(j)] +=
          weight * (v[static_cast<std::size_t>(mask | bit)] - base);
    }
  }
  meter.finish(out);
  return out;
}

// ---------------------------------------------------------------------------
// Equal-surplus family

AttributionVector es_family(RuleId rule, Game& game, const Options& opts) {
  const int n = game.num_players();
  Meter meter(game);

  const double v_empty = game.value(Coalition::empty());
  const double v_grand = game.value(Coalition::full(n));
  const double total = v_grand - v_empty;
  const double tol = null_tolerance(total, opts);

  AttributionVector out = zero_vector(n, rule);
  auto fail = [&](bool degenerate_applies) {
    if (degenerate_applies && std::abs(total) <= tol) {
      out.flags |= kDegenerateTotal;  // zeros are the unique efficient answer
    } else {
      out.values.assign(static_cast<std::size_t>(n), kNaN);
      out.flags |= kRuleUndefined;
    }
    meter.finish(out);
    return out;
  };

  switch (rule) {
    case RuleId::ES: {
      const auto es = baseline_marginals(game, v_empty);
      const double share = (total - sum(es)) / n;
      for (int j = 0; j < n; ++j)
        out.values[static_cast<std::size_t>(j)] =
            es[static_cast<std::size_t>(j)] + share;
      break;
    }
    case RuleId::ENSC: {
      const auto ensc = grand_marginals(game, v_grand);
      const double share = (total - sum(ensc)) / n;
      for (int j = 0; j < n; ++j)
        out.values[static_cast<std::size_t>(j)] =
            ensc[static_cast<std::size_t>(j)] + share;
      break;
    }
    case RuleId::ESENSC: {
      const auto es = baseline_marginals(game, v_empty);
      const auto ensc = grand_marginals(game, v_grand);
      const double share = (total - 0.5 * (sum(es) + sum(ensc))) / n;
      for (int j = 0; j < n; ++j)
        out.values[static_cast<std::size_t>(j)] =
            0.5 * (es[static_cast<std::size_t>(j)] +
                   ensc[static_cast<std::size_t>(j)]) +
            share;
      break;
    }
    case RuleId::ES_REV1: {
      const auto es = baseline_marginals(game, v_empty);
      int active = 0;
      for (double m : es)
        if (std::abs(m) > tol) ++active;
      if (active == 0) return fail(true);
      const double share = (total - sum(es)) / active;
      for (int j = 0; j < n; ++j) {
        const double m = es[static_cast<std::size_t>(j)];
        out.values[static_cast<std::size_t>(j)] =
            std::abs(m) > tol ? m + share : 0.0;
      }
      break;
    }
    case RuleId::ENSC_REV1: {
      const auto ensc = grand_marginals(game, v_grand);
      int active = 0;
      for (double m : ensc)
        if (std::abs(m) > tol) ++active;
      if (active == 0) return fail(true);
      const double share = (total - sum(ensc)) / active;
      for (int j = 0; j < n; ++j) {
        const double m = ensc[static_cast<std::size_t>(j)];
        out.values[static_cast<std::size_t>(j)] =
            std::abs(m) > tol ? m + share : 0.0;
      }
      break;
    }
    case RuleId::ESENSC_REV1: {
      const auto es = baseline_marginals(game, v_empty);
      const auto ensc = grand_marginals(game, v_grand);
      int active_es = 0, active_ensc = 0;
      for (double m : es)
        if (std::abs(m) > tol) ++active_es;
      for (double m : ensc)
        if (std::abs(m) > tol) ++active_ensc;
      if (active_es == 0 || active_ensc == 0) return fail(true);
      const double share_es = (total - sum(es)) / active_es;
      const double share_ensc = (total - sum(ensc)) / active_ensc;
      for (int j = 0; j < n; ++j) {
        const double a = es[static_cast<std::size_t>(j)];
        const double b = ensc[static_cast<std::size_t>(j)];
        out.values[static_cast<std::size_t>(j)] =
            0.5 * ((std::abs(a) > tol ? a + share_es : 0.0) +
                   (std::abs(b) > tol ? b + share_ensc : 0.0));
      }
      break;
    }
    case RuleId::ESENSC_REV2: {
      const auto es = baseline_marginals(game, v_empty);
      const auto ensc = grand_marginals(game, v_grand);
      int active = 0;
      double mid_sum = 0.0;
      for (int j = 0; j < n; ++j) {
        const double a = es[static_cast<std::size_t>(j)];
        const double b = ensc[static_cast<std::size_t>(j)];
        if (std::abs(a) > tol || std::abs(b) > tol) ++active;
        mid_sum += 0.5 * (a + b);
      }
      if (active == 0) return fail(true);  // game outside the domain V
      const double share = (total - mid_sum) / active;
      for (int j = 0; j < n; ++j) {
        const double a = es[static_cast<std::size_t>(j)];
        const double b = ensc[static_cast<std::size_t>(j)];
        out.values[static_cast<std::size_t>(j)] =
            (std::abs(a) > tol || std::abs(b) > tol) ? 0.5 * (a + b) + share
                                                     : 0.0;
      }
      break;
    }
    default:
      throw Error("es_family: unsupported rule " + std::string(to_string(rule)));
  }
  meter.finish(out);
  return out;
}

// ---------------------------------------------------------------------------
// Proportional family

AttributionVector pa_family(RuleId rule, Game& game, const Options& opts) {
  const int n = game.num_players();
  Meter meter(game);

  const double v_empty = game.value(Coalition::empty());
  const double v_grand = game.value(Coalition::full(n));
  const double total = v_grand - v_empty;

  AttributionVector out = zero_vector(n, rule);
  auto fail = [&]() {
    out.values.assign(static_cast<std::size_t>(n), kNaN);
    out.flags |= kRuleUndefined;
    meter.finish(out);
    return out;
  };

  // Denominator tests are exact: near-zero weight sums keep proportional
  // rules defined (that blow-up behavior is the point of the 4.2 example).
  switch (rule) {
    case RuleId::PA: {
      const auto es = baseline_marginals(game, v_empty);
      const double denom = sum(es);
      if (denom == 0.0) return fail();
      for (int j = 0; j < n; ++j)
        out.values[static_cast<std::size_t>(j)] =
            es[static_cast<std::size_t>(j)] / denom * total;
      break;
    }
    case RuleId::ROP: {
      const auto ensc = grand_marginals(game, v_grand);
      const double denom = sum(ensc);
      if (denom == 0.0) return fail();
      for (int j = 0; j < n; ++j)
        out.values[static_cast<std::size_t>(j)] =
            ensc[static_cast<std::size_t>(j)] / denom * total;
      break;
    }
    case RuleId::PAROP: {
      const auto es = baseline_marginals(game, v_empty);
      const auto ensc = grand_marginals(game, v_grand);
      const double denom_pa = sum(es);
      const double denom_rop = sum(ensc);
      if (denom_pa == 0.0 || denom_rop == 0.0) return fail();
      for (int j = 0; j < n; ++j)
        out.values[static_cast<std::size_t>(j)] =
            0.5 * (es[static_cast<std::size_t>(j)] / denom_pa * total +
                   ensc[static_cast<std::size_t>(j)] / denom_rop * total);
      break;
    }
    case RuleId::RPA: {
      const auto es = baseline_marginals(game, v_empty);
      const double es_sum = sum(es);
      const double denom = n * total - (n - 1) * es_sum;
      if (denom == 0.0) return fail();
      for (int j = 0; j < n; ++j) {
        const double weight =
            total - (es_sum - es[static_cast<std::size_t>(j)]);
        out.values[static_cast<std::size_t>(j)] = weight / denom * total;
      }
      break;
    }
    case RuleId::PARPA: {
      const auto es = baseline_marginals(game, v_empty);
      const double es_sum = sum(es);
      if (total * es_sum > 0.0) {
        for (int j = 0; j < n; ++j)
          out.values[static_cast<std::size_t>(j)] =
              es[static_cast<std::size_t>(j)] / es_sum * total;
      } else {
        const double denom = n * total - (n - 1) * es_sum;
        if (denom == 0.0) return fail();
        for (int j = 0; j < n; ++j) {
          const double weight =
              total - (es_sum - es[static_cast<std::size_t>(j)]);
          out.values[static_cast<std::size_t>(j)] = weight / denom * total;
        }
      }
      break;
    }
    default:
      throw Error("pa_family: unsupported rule " + std::string(to_string(rule)));
  }
  (void)opts;
  meter.finish(out);
  return out;
}

// ---------------------------------------------------------------------------
// Adjusted Gately value

AttributionVector gately_adjusted(Game& game, const Options& opts) {
  const int n = game.num_players();
  Meter meter(game);

  const double v_empty = game.value(Coalition::empty());
  const double v_grand = game.value(Coalition::full(n));
  const double total = v_grand - v_empty;
  const auto es = baseline_marginals(game, v_empty);
  const auto ensc = grand_marginals(game, v_grand);
  const double es_sum = sum(es);
  const double ensc_sum = sum(ensc);

  AttributionVector out = zero_vector(n, RuleId::GATELY_ADJ);
  auto fail = [&]() {
    out.values.assign(static_cast<std::size_t>(n), kNaN);
    out.flags |= kRuleUndefined;
    meter.finish(out);
    return out;
  };

  const double denom = es_sum - ensc_sum;
  const double denom_tol = opts.zero_tol_scale *
                           std::max({1.0, std::abs(total), std::abs(es_sum),
                                     std::abs(ensc_sum)});
  if (std::abs(denom) <= denom_tol) {
    // Degenerate calibration: any alpha is efficient iff the intermediate
    // identity holds; use the midpoint allocation then.
    const double mid_sum = 0.5 * (es_sum + ensc_sum);
    if (std::abs(total - mid_sum) <= null_tolerance(total, opts)) {
      out.alpha = 0.5;
      out.flags |= kFallbackTaken;
      for (int j = 0; j < n; ++j)
        out.values[static_cast<std::size_t>(j)] =
            0.5 * (es[static_cast<std::size_t>(j)] +
                   ensc[static_cast<std::size_t>(j)]);
      meter.finish(out);
      return out;
    }
    return fail();
  }

  const double alpha = (total - ensc_sum) / denom;
  out.alpha = alpha;
  if (alpha >= 0.0 && alpha <= 1.0) {
    for (int j = 0; j < n; ++j)
      out.values[static_cast<std::size_t>(j)] =
          alpha * es[static_cast<std::size_t>(j)] +
          (1.0 - alpha) * ensc[static_cast<std::size_t>(j)];
  } else if (alpha > 1.0) {
    if (es_sum == 0.0) return fail();
    out.flags |= kFallbackTaken;
    for (int j = 0; j < n; ++j)
      out.values[static_cast<std::size_t>(j)] =
          es[static_cast<std::size_t>(j)] / es_sum * total;
  } else {
    if (ensc_sum == 0.0) return fail();
    out.flags |= kFallbackTaken;
    for (int j = 0; j < n; ++j)
      out.values[static_cast<std::size_t>(j)] =
          ensc[static_cast<std::size_t>(j)] / ensc_sum * total;
  }
  meter.finish(out);
  return out;
}

// ---------------------------------------------------------------------------
// Axiom-independence counterexample rules psi1..psi5

AttributionVector counterexample_rule(RuleId rule, Game& game,
                                      const Options& opts) {
  const int n = game.num_players();
  if (rule == RuleId::PSI5) {
    if (n > kExactShapMaxPlayers && !opts.force_exact)
      throw GuardError("PSI5 needs full power-set access; refused for n > 25");
    if (n > 63) throw GuardError("PSI5 enumeration requires n <= 63");
  }
  Meter meter(game);

  const double v_empty = game.value(Coalition::empty());
  const double v_grand = game.value(Coalition::full(n));
  const double total = v_grand - v_empty;
  const double tol = null_tolerance(total, opts);
  const auto es = baseline_marginals(game, v_empty);
  const auto ensc = grand_marginals(game, v_grand);

  std::vector<char> active(static_cast<std::size_t>(n), 0);
  int active_count = 0;
  double mid_sum = 0.0;
  std::vector<double> mid(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double a = es[static_cast<std::size_t>(j)];
    const double b = ensc[static_cast<std::size_t>(j)];
    mid[static_cast<std::size_t>(j)] = 0.5 * (a + b);
    mid_sum += mid[static_cast<std::size_t>(j)];
    if (std::abs(a) > tol || std::abs(b) > tol) {
      active[static_cast<std::size_t>(j)] = 1;
      ++active_count;
    }
  }

  AttributionVector out = zero_vector(n, rule);
  if (active_count == 0) {  // outside the domain V
    out.values.assign(static_cast<std::size_t>(n), kNaN);
    out.flags |= kRuleUndefined;
    meter.finish(out);
    return out;
  }
  const double residual = total - mid_sum;

  switch (rule) {
    case RuleId::PSI1:
      out.values = mid;
      break;
    case RuleId::PSI2:
      for (int j = 0; j < n; ++j)
        out.values[static_cast<std::size_t>(j)] =
            mid[static_cast<std::size_t>(j)] + residual / n;
      break;
    case RuleId::PSI3: {
      // residual split by 1-based player index; deliberately label-dependent
      double index_sum = 0.0;
      for (int j = 0; j < n; ++j)
        if (active[static_cast<std::size_t>(j)]) index_sum += j + 1;
      for (int j = 0; j < n; ++j)
        out.values[static_cast<std::size_t>(j)] =
            active[static_cast<std::size_t>(j)]
                ? mid[static_cast<std::size_t>(j)] +
                      (j + 1) * residual / index_sum
                : 0.0;
      break;
    }
    case RuleId::PSI4:
      for (int j = 0; j < n; ++j)
        out.values[static_cast<std::size_t>(j)] =
            active[static_cast<std::size_t>(j)] ? total / active_count : 0.0;
      break;
    case RuleId::PSI5: {
      // true null players need every marginal, not just the edge slices
      const std::uint64_t count = std::uint64_t{1} << n;
      std::vector<double> v(count);
      for (std::uint64_t mask = 0; mask < count; ++mask)
        v[static_cast<std::size_t>(mask)] = game.value(mask);
      std::vector<char> is_null(static_cast<std::size_t>(n), 1);
      for (int j = 0; j < n; ++j) {
        const std::uint64_t bit = std::uint64_t{1} << j;
        for (std::uint64_t mask = 0; mask < count; ++mask) {
          if (mask & bit) continue;
          if (std::abs(v[static_cast<std::size_t>(mask | bit)] -
                       v[static_cast<std::size_t>(mask)]) > tol) {
            is_null[static_cast<std::size_t>(j)] = 0;
            break;
          }
        }
      }
      int non_null = 0;
      for (int j = 0; j < n; ++j)
        if (!is_null[static_cast<std::size_t>(j)]) ++non_null;
      for (int j = 0; j < n; ++j)
        out.values[static_cast<std::size_t>(j)] =
            is_null[static_cast<std::size_t>(j)]
                ? 0.0
                : mid[static_cast<std::size_t>(j)] + residual / non_null;
      break;
    }
    default:
      throw Error("counterexample_rule: unsupported rule " +
                  std::string(to_string(rule)));
  }
  meter.finish(out);
  return out;
}

AttributionVector attribute(RuleId rule, Game& game, const Options& opts) {
  switch (rule) {
    case RuleId::SHAP:
      return exact_shap(game, opts);
    case RuleId::ES:
    case RuleId::ENSC:
    case RuleId::ESENSC:
    case RuleId::ES_REV1:
    case RuleId::ENSC_REV1:
    case RuleId::ESENSC_REV1:
    case RuleId::ESENSC_REV2:
      return es_family(rule, game, opts);
    case RuleId::PA:
    case RuleId::ROP:
    case RuleId::PAROP:
    case RuleId::RPA:
    case RuleId::PARPA:
      return pa_family(rule, game, opts);
    case RuleId::GATELY_ADJ:
      return gately_adjusted(game, opts);
    default:
      return counterexample_rule(rule, game, opts);
  }
}

}  // namespace xaitu::rules
