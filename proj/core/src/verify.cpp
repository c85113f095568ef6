#include "xaitu/verify.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>

#include "xaitu/errors.hpp"
#include "xaitu/rng.hpp"

namespace xaitu::verify {

namespace {

constexpr std::array<AxiomId, 5> kAllAxioms = {
    AxiomId::EFFICIENCY, AxiomId::NULL_PLAYER,
    AxiomId::RESTRICTED_DIFF_MARGINALITY, AxiomId::INTERMEDIATE_INESSENTIAL,
    AxiomId::REDUCTION_COMPLEXITY};

constexpr std::array<std::string_view, 5> kAxiomNames = {
    "EFFICIENCY", "NULL_PLAYER", "RESTRICTED_DIFF_MARGINALITY",
    "INTERMEDIATE_INESSENTIAL", "REDUCTION_COMPLEXITY"};

constexpr std::array<std::string_view, 5> kModeNames = {
    "uniform", "with-null-player", "sign-stratified", "intermediate-inessential",
    "outside-v"};

constexpr int kMaxGeneratedPlayers = 20;

double scaled_tol(double rel, double magnitude) {
  return rel * std::max(1.0, std::abs(magnitude));
}

double snap_total(const GameSnapshot& s) {
  if (s.family == SnapshotFamily::full)
    return s.full_values[(std::size_t{1} << s.n) - 1] - s.full_values[0];
  return s.grand_value - s.empty_value;
}

double baseline_marginal(const GameSnapshot& s, int j) {
  if (s.family == SnapshotFamily::full)
    return s.full_values[std::size_t{1} << j] - s.full_values[0];
  return s.singleton_values[static_cast<std::size_t>(j)] - s.empty_value;
}

double grand_marginal(const GameSnapshot& s, int j) {
  if (s.family == SnapshotFamily::full) {
    const std::uint64_t grand = (std::uint64_t{1} << s.n) - 1;
    return s.full_values[static_cast<std::size_t>(grand)] -
           s.full_values[static_cast<std::size_t>(grand ^ (std::uint64_t{1} << j))];
  }
  return s.grand_value - s.drop_one_values[static_cast<std::size_t>(j)];
}

// quantize to a 2^-20 grid; sums and differences of such values in the
// magnitudes used here are exact in double
double dyadic(double x) { return std::round(x * 1048576.0) / 1048576.0; }

AttributionVector run_rule(RuleId rule, const GameSnapshot& snap,
                           const rules::Options& opts) {
  SnapshotGame game(snap);
  return rules::attribute(rule, game, opts);
}

}  // namespace

std::string_view to_string(AxiomId axiom) {
  return kAxiomNames[static_cast<std::size_t>(axiom)];
}

std::optional<AxiomId> axiom_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kAxiomNames.size(); ++i)
    if (kAxiomNames[i] == name) return kAllAxioms[i];
  return std::nullopt;
}

std::span<const AxiomId> all_axioms() { return kAllAxioms; }

std::string_view to_string(GameMode mode) {
  return kModeNames[static_cast<std::size_t>(mode)];
}

std::optional<GameMode> mode_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kModeNames.size(); ++i)
    if (kModeNames[i] == name)
      return static_cast<GameMode>(static_cast<int>(i));
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Generators

namespace {

std::vector<double> uniform_values(int n, Rng& rng) {
  std::vector<double> v(std::size_t{1} << n);
  for (double& x : v) x = rng.uniform(-10.0, 10.0);
  return v;
}

GameSnapshot make_uniform(int n, Rng& rng) {
  return GameSnapshot::full_game(n, uniform_values(n, rng), "uniform");
}

GameSnapshot make_with_null_player(int n, Rng& rng) {
  auto v = uniform_values(n, rng);
  const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  const std::uint64_t bit = std::uint64_t{1} << i;
  for (std::uint64_t mask = 0; mask < v.size(); ++mask)
    if (mask & bit) v[static_cast<std::size_t>(mask)] = v[static_cast<std::size_t>(mask ^ bit)];
  auto snap = GameSnapshot::full_game(
      n, std::move(v), "null-player:" + std::to_string(i + 1));
  // certificate: every marginal of i vanishes exactly
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (mask & bit) continue;
    if (snap.full_values[static_cast<std::size_t>(mask | bit)] !=
        snap.full_values[static_cast<std::size_t>(mask)])
      throw GeneratorExhausted("null-player construction failed its certificate");
  }
  return snap;
}

GameSnapshot make_sign_stratified(int n, Rng& rng, int sign_total,
                                  int sign_singletons) {
  if (n < 2)
    throw GeneratorExhausted("sign-stratified games need n >= 2");
  if (sign_total != 1 && sign_total != -1)
    throw GeneratorExhausted("sign_total must be +1 or -1");
  if (sign_singletons < -1 || sign_singletons > 1)
    throw GeneratorExhausted("sign_singletons must be -1, 0 or +1");

  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<double> v(std::size_t{1} << n);
    for (double& x : v) x = dyadic(rng.uniform(-10.0, 10.0));
    const double v0 = v[0];

    // singleton marginals on the dyadic grid, last one closing the target sum
    std::vector<double> m(static_cast<std::size_t>(n));
    for (int j = 0; j + 1 < n; ++j)
      m[static_cast<std::size_t>(j)] = dyadic(rng.uniform(-8.0, 8.0));
    const double target_sum =
        sign_singletons == 0 ? 0.0 : sign_singletons * dyadic(rng.uniform(0.5, 8.0));
    double partial = 0.0;
    for (int j = 0; j + 1 < n; ++j) partial += m[static_cast<std::size_t>(j)];
    m[static_cast<std::size_t>(n - 1)] = target_sum - partial;
    if (std::abs(m[static_cast<std::size_t>(n - 1)]) > 64.0) continue;

    bool distinct = false;
    for (int j = 1; j < n; ++j)
      if (m[static_cast<std::size_t>(j)] != m[0]) distinct = true;
    if (!distinct) continue;

    for (int j = 0; j < n; ++j)
      v[std::size_t{1} << j] = v0 + m[static_cast<std::size_t>(j)];
    v[(std::size_t{1} << n) - 1] = v0 + sign_total * dyadic(rng.uniform(0.5, 8.0));

    auto snap = GameSnapshot::full_game(
        n, std::move(v),
        std::string("sign-stratified:") + (sign_total > 0 ? "+" : "-") +
            (sign_singletons > 0 ? "+" : (sign_singletons < 0 ? "-" : "0")));

    // certificate, summing exactly the way consumers do
    double es_sum = 0.0;
    for (int j = 0; j < n; ++j) es_sum += baseline_marginal(snap, j);
    const double total = snap_total(snap);
    const bool total_ok = sign_total > 0 ? total > 0 : total < 0;
    const bool sum_ok = sign_singletons == 0
                            ? es_sum == 0.0
                            : (sign_singletons > 0 ? es_sum > 0 : es_sum < 0);
    if (total_ok && sum_ok) return snap;
  }
  throw GeneratorExhausted("sign-stratified generator exhausted its attempts");
}

GameSnapshot make_intermediate(int n, Rng& rng) {
  auto v = uniform_values(n, rng);
  if (n > 2) {
    // close the identity by solving for v(N \ {player 0})
    const std::uint64_t grand = (std::uint64_t{1} << n) - 1;
    const double v0 = v[0];
    const double vN = v[static_cast<std::size_t>(grand)];
    double es_sum = 0.0;
    for (int j = 0; j < n; ++j)
      es_sum += v[std::size_t{1} << j] - v0;
    double others = 0.0;  // sum of v(N\k) for k != 0
    for (int k = 1; k < n; ++k)
      others += v[static_cast<std::size_t>(grand ^ (std::uint64_t{1} << k))];
    v[static_cast<std::size_t>(grand ^ 1ull)] =
        n * vN - others - 2.0 * (vN - v0) + es_sum;
  }
  auto snap = GameSnapshot::full_game(n, std::move(v), "intermediate-inessential");
  double mid_sum = 0.0;
  for (int j = 0; j < n; ++j)
    mid_sum += 0.5 * (baseline_marginal(snap, j) + grand_marginal(snap, j));
  const double total = snap_total(snap);
  if (std::abs(total - mid_sum) > scaled_tol(1e-12, total) * 64.0)
    throw GeneratorExhausted("intermediate-inessential identity failed to close");
  return snap;
}

GameSnapshot make_outside_v(int n, Rng& rng) {
  if (n < 3)
    throw GeneratorExhausted(
        "outside-V games with v(N) != v(empty) need n >= 3 (edge slices overlap)");
  auto v = uniform_values(n, rng);
  const std::uint64_t grand = (std::uint64_t{1} << n) - 1;
  if (v[static_cast<std::size_t>(grand)] == v[0])
    v[static_cast<std::size_t>(grand)] += 1.0;
  for (int j = 0; j < n; ++j) {
    v[std::size_t{1} << j] = v[0];
    v[static_cast<std::size_t>(grand ^ (std::uint64_t{1} << j))] =
        v[static_cast<std::size_t>(grand)];
  }
  auto snap = GameSnapshot::full_game(n, std::move(v), "outside-v");
  for (int j = 0; j < n; ++j)
    if (baseline_marginal(snap, j) != 0.0 || grand_marginal(snap, j) != 0.0)
      throw GeneratorExhausted("outside-V construction failed its certificate");
  return snap;
}

}  // namespace

GameSnapshot generate_game(const GameGenSpec& spec) {
  if (spec.n < 1) throw GeneratorExhausted("games need n >= 1");
  if (spec.n > kMaxGeneratedPlayers)
    throw GuardError("generated full games are limited to n <= 20");
  Rng rng(spec.seed);
  switch (spec.mode) {
    case GameMode::uniform:
      return make_uniform(spec.n, rng);
    case GameMode::with_null_player:
      if (spec.n < 2) throw GeneratorExhausted("null-player games need n >= 2");
      return make_with_null_player(spec.n, rng);
    case GameMode::sign_stratified:
      return make_sign_stratified(spec.n, rng, spec.sign_total,
                                  spec.sign_singletons);
    case GameMode::intermediate_inessential:
      return make_intermediate(spec.n, rng);
    case GameMode::outside_v:
      return make_outside_v(spec.n, rng);
  }
  throw GeneratorExhausted("unknown game mode");
}

RdmPair generate_rdm_pair(int n, std::uint64_t seed) {
  if (n < 2) throw GeneratorExhausted("marginality pairs need n >= 2");
  if (n > kMaxGeneratedPlayers)
    throw GuardError("generated full games are limited to n <= 20");
  Rng rng(seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto v = uniform_values(n, rng);
    const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
    if (j >= i) ++j;
    const std::uint64_t bi = std::uint64_t{1} << i;
    const std::uint64_t bj = std::uint64_t{1} << j;

    auto w = v;
    for (std::uint64_t mask = 0; mask < w.size(); ++mask) {
      const bool has_i = (mask & bi) != 0;
      const bool has_j = (mask & bj) != 0;
      if (has_i == has_j)  // both or neither: unconstrained by condition (i)
        w[static_cast<std::size_t>(mask)] += rng.uniform(-5.0, 5.0);
    }
    // coalitions with exactly one of {i,j} get a common shift g(S)
    for (std::uint64_t rest = 0; rest < (std::uint64_t{1} << n); ++rest) {
      if (rest & (bi | bj)) continue;
      const double g = rng.uniform(-5.0, 5.0);
      w[static_cast<std::size_t>(rest | bi)] += g;
      w[static_cast<std::size_t>(rest | bj)] += g;
    }

    RdmPair pair{GameSnapshot::full_game(n, std::move(v), "rdm-pair:v"),
                 GameSnapshot::full_game(n, std::move(w), "rdm-pair:w"), i, j};

    // conditions (ii)/(iii): all players active in both games, by rejection
    auto all_active = [n](const GameSnapshot& s) {
      for (int k = 0; k < n; ++k)
        if (std::abs(baseline_marginal(s, k)) <= 1e-9 &&
            std::abs(grand_marginal(s, k)) <= 1e-9)
          return false;
      return true;
    };
    if (!all_active(pair.v) || !all_active(pair.w)) continue;

    // condition (i) certificate on a sample of S (exact by construction)
    for (std::uint64_t rest = 0; rest < (std::uint64_t{1} << n); ++rest) {
      if (rest & (bi | bj)) continue;
      const double dv = pair.v.full_values[static_cast<std::size_t>(rest | bi)] -
                        pair.v.full_values[static_cast<std::size_t>(rest | bj)];
      const double dw = pair.w.full_values[static_cast<std::size_t>(rest | bi)] -
                        pair.w.full_values[static_cast<std::size_t>(rest | bj)];
      if (std::abs(dv - dw) > 1e-9)
        throw GeneratorExhausted("marginality pair failed its certificate");
    }
    return pair;
  }
  throw GeneratorExhausted("marginality pair generator exhausted its attempts");
}

ReductionPair generate_reduction_pair(int n, std::uint64_t seed) {
  if (n > kMaxGeneratedPlayers)
    throw GuardError("generated full games are limited to n <= 20");
  Rng rng(seed);
  if (n < 4) {
    auto v = make_uniform(n, rng);  // no interior coalitions to disagree on
    return ReductionPair{v, v};
  }
  const bool null_seeded = (seed % 2) == 1;
  GameSnapshot v = null_seeded ? make_with_null_player(n, rng) : make_uniform(n, rng);
  int forced_member = -1;
  if (null_seeded) {
    // the injected null player's index is recorded in the provenance
    forced_member = std::stoi(v.provenance.substr(v.provenance.find(':') + 1)) - 1;
  }
  auto w_values = v.full_values;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const std::uint64_t mask = rng.below(std::uint64_t{1} << n);
    const int size = std::popcount(mask);
    if (size < 2 || size > n - 2) continue;
    if (forced_member >= 0 && !(mask & (std::uint64_t{1} << forced_member)))
      continue;
    w_values[static_cast<std::size_t>(mask)] += rng.uniform(1.0, 5.0);
    ReductionPair pair{std::move(v),
                       GameSnapshot::full_game(n, std::move(w_values),
                                               "reduction-pair:w")};
    return pair;
  }
  throw GeneratorExhausted("reduction pair generator exhausted its attempts");
}

GameSnapshot nullify_interior(const GameSnapshot& v, int player) {
  const int n = v.n;
  if (n < 4) throw GeneratorExhausted("interior rewiring needs n >= 4");
  if (v.family != SnapshotFamily::full)
    throw Error("interior rewiring needs a full snapshot");
  const std::uint64_t bit = std::uint64_t{1} << player;
  std::vector<double> out(v.full_values.size());
  for (std::uint64_t mask = 0; mask < out.size(); ++mask) {
    const int size = std::popcount(mask);
    double value;
    if (mask & bit)
      value = size == 2 ? v.full_values[static_cast<std::size_t>(mask ^ bit)]
                        : v.full_values[static_cast<std::size_t>(mask)];
    else
      value = (size == 0 || size == 1 || size == n - 1)
                  ? v.full_values[static_cast<std::size_t>(mask)]
                  : v.full_values[static_cast<std::size_t>(mask | bit)];
    out[static_cast<std::size_t>(mask)] = value;
  }
  return GameSnapshot::full_game(n, std::move(out),
                                 "nullified:" + std::to_string(player + 1));
}

std::vector<int> null_players(const GameSnapshot& snap, double tol) {
  if (snap.family != SnapshotFamily::full)
    throw Error("null-player detection needs a full snapshot");
  std::vector<int> out;
  const std::uint64_t count = std::uint64_t{1} << snap.n;
  for (int j = 0; j < snap.n; ++j) {
    const std::uint64_t bit = std::uint64_t{1} << j;
    bool is_null = true;
    for (std::uint64_t mask = 0; mask < count && is_null; ++mask) {
      if (mask & bit) continue;
      if (std::abs(snap.full_values[static_cast<std::size_t>(mask | bit)] -
                   snap.full_values[static_cast<std::size_t>(mask)]) > tol)
        is_null = false;
    }
    if (is_null) out.push_back(j);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Axiom checks

Verdict check_efficiency(RuleId rule, std::span<const GameSnapshot> games,
                         const SuiteConfig& cfg) {
  Verdict verdict;
  for (const auto& snap : games) {
    const auto psi = run_rule(rule, snap, cfg.rule_opts);
    if (psi.undefined()) {
      ++verdict.vacuous;
      continue;
    }
    ++verdict.checked;
    const double total = snap_total(snap);
    const double gap = std::abs(psi.sum() - total);
    if (gap > scaled_tol(cfg.rel_tol, total)) {
      verdict.pass = false;
      verdict.witnesses.push_back(
          Witness{snap, std::nullopt, {}, gap, cfg.seed, "sum != v(N)-v(empty)"});
      if (verdict.witnesses.size() >= 8) break;
    }
  }
  return verdict;
}

Verdict check_null_player(RuleId rule, std::span<const GameSnapshot> games,
                          const SuiteConfig& cfg) {
  Verdict verdict;
  for (const auto& snap : games) {
    const double total = snap_total(snap);
    const auto nulls = null_players(snap, scaled_tol(1e-12, total));
    if (nulls.empty()) {
      ++verdict.vacuous;
      continue;
    }
    const auto psi = run_rule(rule, snap, cfg.rule_opts);
    if (psi.undefined()) {
      ++verdict.vacuous;
      continue;
    }
    ++verdict.checked;
    for (int i : nulls) {
      const double gap = std::abs(psi.values[static_cast<std::size_t>(i)]);
      if (gap > scaled_tol(cfg.rel_tol, total)) {
        verdict.pass = false;
        verdict.witnesses.push_back(Witness{
            snap, std::nullopt, {i}, gap, cfg.seed, "null player attributed"});
        break;
      }
    }
    if (!verdict.pass && verdict.witnesses.size() >= 8) break;
  }
  return verdict;
}

Verdict check_rdm(RuleId rule, std::span<const RdmPair> pairs,
                  const SuiteConfig& cfg) {
  Verdict verdict;
  for (const auto& pair : pairs) {
    const auto psi_v = run_rule(rule, pair.v, cfg.rule_opts);
    const auto psi_w = run_rule(rule, pair.w, cfg.rule_opts);
    if (psi_v.undefined() || psi_w.undefined()) {
      ++verdict.vacuous;
      continue;
    }
    ++verdict.checked;
    const auto i = static_cast<std::size_t>(pair.i);
    const auto j = static_cast<std::size_t>(pair.j);
    const double dv = psi_v.values[i] - psi_v.values[j];
    const double dw = psi_w.values[i] - psi_w.values[j];
    const double scale =
        std::max({std::abs(psi_v.values[i]), std::abs(psi_v.values[j]),
                  std::abs(psi_w.values[i]), std::abs(psi_w.values[j])});
    if (std::abs(dv - dw) > scaled_tol(cfg.rel_tol, scale)) {
      verdict.pass = false;
      verdict.witnesses.push_back(Witness{pair.v,
                                          pair.w,
                                          {pair.i, pair.j},
                                          std::abs(dv - dw),
                                          cfg.seed,
                                          "attribution differences diverge"});
      if (verdict.witnesses.size() >= 8) break;
    }
  }
  return verdict;
}

Verdict check_intermediate(RuleId rule, std::span<const GameSnapshot> games,
                           const SuiteConfig& cfg) {
  Verdict verdict;
  for (const auto& snap : games) {
    const auto psi = run_rule(rule, snap, cfg.rule_opts);
    if (psi.undefined()) {
      ++verdict.vacuous;
      continue;
    }
    ++verdict.checked;
    for (int i = 0; i < snap.n; ++i) {
      const double want =
          0.5 * (baseline_marginal(snap, i) + grand_marginal(snap, i));
      const double gap =
          std::abs(psi.values[static_cast<std::size_t>(i)] - want);
      if (gap > scaled_tol(cfg.rel_tol, want)) {
        verdict.pass = false;
        verdict.witnesses.push_back(Witness{
            snap, std::nullopt, {i}, gap, cfg.seed,
            "intermediate allocation not matched"});
        break;
      }
    }
    if (!verdict.pass && verdict.witnesses.size() >= 8) break;
  }
  return verdict;
}

Verdict check_reduction(RuleId rule, std::span<const ReductionPair> pairs,
                        const SuiteConfig& cfg) {
  Verdict verdict;
  for (const auto& pair : pairs) {
    const auto psi_v = run_rule(rule, pair.v, cfg.rule_opts);
    const auto psi_w = run_rule(rule, pair.w, cfg.rule_opts);
    if (psi_v.undefined() && psi_w.undefined()) {
      ++verdict.vacuous;
      continue;
    }
    ++verdict.checked;
    bool bad = psi_v.undefined() != psi_w.undefined();
    double gap = 0.0;
    int player = -1;
    if (!bad) {
      for (int i = 0; i < pair.v.n; ++i) {
        const double a = psi_v.values[static_cast<std::size_t>(i)];
        const double b = psi_w.values[static_cast<std::size_t>(i)];
        if (std::abs(a - b) > scaled_tol(cfg.rel_tol, std::max(std::abs(a), std::abs(b)))) {
          bad = true;
          gap = std::abs(a - b);
          player = i;
          break;
        }
      }
    }
    if (bad) {
      verdict.pass = false;
      verdict.witnesses.push_back(Witness{
          pair.v, pair.w, player >= 0 ? std::vector<int>{player} : std::vector<int>{},
          gap, cfg.seed, "edge-identical games attributed differently"});
      if (verdict.witnesses.size() >= 8) break;
    }
  }
  return verdict;
}

Verdict check_axiom(AxiomId axiom, RuleId rule, const SuiteConfig& cfg) {
  Rng rng(cfg.seed);
  switch (axiom) {
    case AxiomId::EFFICIENCY: {
      std::vector<GameSnapshot> games;
      games.reserve(cfg.games);
      for (std::size_t k = 0; k < cfg.games; ++k)
        games.push_back(generate_game(
            {cfg.n, GameMode::uniform, rng.next(), +1, +1}));
      return check_efficiency(rule, games, cfg);
    }
    case AxiomId::NULL_PLAYER: {
      std::vector<GameSnapshot> games;
      games.reserve(cfg.games);
      for (std::size_t k = 0; k < cfg.games; ++k)
        games.push_back(generate_game(
            {cfg.n, GameMode::with_null_player, rng.next(), +1, +1}));
      return check_null_player(rule, games, cfg);
    }
    case AxiomId::RESTRICTED_DIFF_MARGINALITY: {
      std::vector<RdmPair> pairs;
      pairs.reserve(cfg.games);
      for (std::size_t k = 0; k < cfg.games; ++k)
        pairs.push_back(generate_rdm_pair(cfg.n, rng.next()));
      return check_rdm(rule, pairs, cfg);
    }
    case AxiomId::INTERMEDIATE_INESSENTIAL: {
      std::vector<GameSnapshot> games;
      games.reserve(cfg.games);
      for (std::size_t k = 0; k < cfg.games; ++k)
        games.push_back(generate_game(
            {cfg.n, GameMode::intermediate_inessential, rng.next(), +1, +1}));
      return check_intermediate(rule, games, cfg);
    }
    case AxiomId::REDUCTION_COMPLEXITY: {
      std::vector<ReductionPair> pairs;
      pairs.reserve(cfg.games);
      for (std::size_t k = 0; k < cfg.games; ++k)
        pairs.push_back(generate_reduction_pair(cfg.n, rng.next()));
      return check_reduction(rule, pairs, cfg);
    }
  }
  throw Error("unknown axiom");
}

Verdict check_order_preservation(RuleId rule, Game& game,
                                 const rules::Options& opts) {
  Verdict verdict;
  const auto psi = rules::attribute(rule, game, opts);
  if (psi.undefined()) {
    verdict.vacuous = 1;
    return verdict;
  }
  verdict.checked = 1;
  const int n = game.num_players();
  const double v_empty = game.value(Coalition::empty());
  std::vector<double> es(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    es[static_cast<std::size_t>(j)] = game.value(Coalition::single(j)) - v_empty;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (es[static_cast<std::size_t>(i)] >= es[static_cast<std::size_t>(j)])
        continue;
      const double gap = psi.values[static_cast<std::size_t>(i)] -
                         psi.values[static_cast<std::size_t>(j)];
      if (gap > 1e-12) {
        verdict.pass = false;
        verdict.witnesses.push_back(
            Witness{GameSnapshot{}, std::nullopt, {i, j}, gap, 0,
                    "marginal order reversed"});
      }
    }
  return verdict;
}

// ---------------------------------------------------------------------------
// Sign-case census

CellMark expected_cell(RuleId rule, int row_total_sign, int col_singleton_sign) {
  const bool pa = rule == RuleId::PA;
  if (col_singleton_sign == 0) return pa ? CellMark::NA : CellMark::OK;
  const bool same_sign = row_total_sign == col_singleton_sign;
  if (pa) return same_sign ? CellMark::OK : CellMark::X;
  return same_sign ? CellMark::MAYBE : CellMark::OK;
}

Table1Report sign_case_census(RuleId rule, int n, std::size_t per_stratum,
                              std::uint64_t seed) {
  if (rule != RuleId::PA && rule != RuleId::RPA)
    throw Error("census is defined for PA and RPA");
  Table1Report report;
  report.rule = rule;
  report.n = n;
  Rng rng(seed);
  const int rows[2] = {+1, -1};
  const int cols[3] = {+1, -1, 0};
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 3; ++c) {
      report.expected[r][c] = expected_cell(rule, rows[r], cols[c]);
      CensusCell& cell = report.cells[r][c];
      for (std::size_t k = 0; k < per_stratum; ++k) {
        const auto snap = generate_game(
            {n, GameMode::sign_stratified, rng.next(), rows[r], cols[c]});
        ++cell.generated;
        SnapshotGame game(snap);
        const auto psi = rules::pa_family(rule, game);
        if (psi.undefined()) continue;
        ++cell.defined;
        // empirical reversal scan over strictly ordered pairs
        bool reversed = false;
        for (int i = 0; i < n && !reversed; ++i)
          for (int j = 0; j < n && !reversed; ++j) {
            if (baseline_marginal(snap, i) >= baseline_marginal(snap, j))
              continue;
            if (psi.values[static_cast<std::size_t>(i)] >
                psi.values[static_cast<std::size_t>(j)] + 1e-12)
              reversed = true;
          }
        if (reversed) ++cell.reversed;
      }
      const CellMark mark = report.expected[r][c];
      bool ok = true;
      std::string why;
      switch (mark) {
        case CellMark::OK:
          ok = cell.defined == cell.generated && cell.reversed == 0;
          why = "OK cell must always be defined and never reverse";
          break;
        case CellMark::X:
          ok = cell.defined == cell.generated && cell.reversed == cell.defined;
          why = "X cell must always reverse";
          break;
        case CellMark::NA:
          ok = cell.defined == 0;
          why = "NA cell must be undefined";
          break;
        case CellMark::MAYBE:
          ok = cell.defined == cell.generated && cell.reversed > 0 &&
               cell.reversed < cell.defined;
          why = "? cell must show both outcomes";
          break;
      }
      if (!ok) {
        report.consistent = false;
        report.detail += std::string(to_string(rule)) + " stratum (" +
                         (rows[r] > 0 ? "+" : "-") + "," +
                         (cols[c] > 0 ? "+" : (cols[c] < 0 ? "-" : "0")) +
                         "): " + why + "; ";
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Independent Shapley oracle

AttributionVector shapley_oracle(Game& game) {
  const int n = game.num_players();
  if (n > 9) throw GuardError("permutation oracle refused for n > 9");
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t evals0 = game.eval_count();

  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<double> v(count);
  for (std::uint64_t mask = 0; mask < count; ++mask)
    v[static_cast<std::size_t>(mask)] = game.value(mask);

  std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t factorial = 0;
  do {
    std::uint64_t mask = 0;
    double prev = v[0];
    for (int j : perm) {
      mask |= std::uint64_t{1} << j;
      const double cur = v[static_cast<std::size_t>(mask)];
      acc[static_cast<std::size_t>(j)] += cur - prev;
      prev = cur;
    }
    ++factorial;
  } while (std::next_permutation(perm.begin(), perm.end()));

  AttributionVector out;
  out.method = "SHAP_ORACLE";
  out.values.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    out.values[static_cast<std::size_t>(j)] =
        acc[static_cast<std::size_t>(j)] / static_cast<double>(factorial);
  out.evals_used = game.eval_count() - evals0;
  out.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return out;
}

// ---------------------------------------------------------------------------
// Harsanyi dividends

DividendTable harsanyi_dividends(Game& game) {
  const int n = game.num_players();
  if (n > 20) throw GuardError("dividend tables refused for n > 20");
  DividendTable table;
  table.n = n;
  const std::uint64_t count = std::uint64_t{1} << n;
  table.lambda.resize(count);
  for (std::uint64_t mask = 0; mask < count; ++mask)
    table.lambda[static_cast<std::size_t>(mask)] = game.value(mask);
  // in-place Moebius transform over the subset lattice
  for (int b = 0; b < n; ++b) {
    const std::uint64_t bit = std::uint64_t{1} << b;
    for (std::uint64_t mask = 0; mask < count; ++mask)
      if (mask & bit)
        table.lambda[static_cast<std::size_t>(mask)] -=
            table.lambda[static_cast<std::size_t>(mask ^ bit)];
  }
  return table;
}

double reconstruct_value(const DividendTable& table, const Coalition& s) {
  const std::uint64_t mask = s.mask();
  // iterate submasks
  double acc = table.lambda[0];
  for (std::uint64_t sub = mask; sub != 0; sub = (sub - 1) & mask)
    acc += table.lambda[static_cast<std::size_t>(sub)];
  return acc;
}

bool null_by_dividends(const DividendTable& table, int player, double tol) {
  const std::uint64_t bit = std::uint64_t{1} << player;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << table.n); ++mask)
    if ((mask & bit) && std::abs(table.lambda[static_cast<std::size_t>(mask)]) > tol)
      return false;
  return true;
}

// ---------------------------------------------------------------------------
// Remark-style impossibility outside the domain V

ImpossibilityCheck check_outside_v_impossibility(const GameSnapshot& v,
                                                 double tol) {
  ImpossibilityCheck out;
  if (v.n < 4) {
    out.detail = "construction requires n >= 4 (and the result assumes n != 3)";
    return out;
  }
  const double total = snap_total(v);
  if (std::abs(total) <= tol) {
    out.detail = "v(N) = v(empty); the three axioms are compatible here";
    return out;
  }
  for (int j = 0; j < v.n; ++j)
    if (std::abs(baseline_marginal(v, j)) > tol ||
        std::abs(grand_marginal(v, j)) > tol) {
      out.detail = "game is inside the domain V";
      return out;
    }
  for (int i = 0; i < v.n; ++i) {
    const auto rewired = nullify_interior(v, i);
    // must agree on the stored edge slices
    for (int j = 0; j < v.n; ++j) {
      if (baseline_marginal(rewired, j) != baseline_marginal(v, j) ||
          grand_marginal(rewired, j) != grand_marginal(v, j)) {
        out.detail = "rewiring changed an edge slice";
        return out;
      }
    }
    if (rewired.full_values[0] != v.full_values[0] ||
        rewired.full_values[(std::size_t{1} << v.n) - 1] !=
            v.full_values[(std::size_t{1} << v.n) - 1]) {
      out.detail = "rewiring changed v(empty) or v(N)";
      return out;
    }
    const auto nulls = null_players(rewired, tol);
    if (std::find(nulls.begin(), nulls.end(), i) == nulls.end()) {
      out.detail = "player " + std::to_string(i + 1) +
                   " is not null after rewiring";
      return out;
    }
  }
  out.established = true;
  out.detail =
      "every player is forced to 0 by null-player + reduction (via the "
      "rewired games), contradicting efficiency since v(N) != v(empty)";
  return out;
}

}  // namespace xaitu::verify
