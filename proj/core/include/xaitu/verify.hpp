#ifndef XAITU_VERIFY_HPP
#define XAITU_VERIFY_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xaitu/attribution.hpp"
#include "xaitu/rules.hpp"
#include "xaitu/snapshot.hpp"

namespace xaitu::verify {

enum class AxiomId {
  EFFICIENCY,
  NULL_PLAYER,
  RESTRICTED_DIFF_MARGINALITY,
  INTERMEDIATE_INESSENTIAL,
  REDUCTION_COMPLEXITY,
};

std::string_view to_string(AxiomId axiom);
std::optional<AxiomId> axiom_from_string(std::string_view name);
std::span<const AxiomId> all_axioms();

/// A replayable counterexample: the game(s), the players involved and the
/// numeric gap that exceeded tolerance.
struct Witness {
  GameSnapshot game;
  std::optional<GameSnapshot> pair_game;
  std::vector<int> players;
  double gap = 0.0;
  std::uint64_t seed = 0;
  std::string note;
};

struct Verdict {
  bool pass = true;
  std::size_t checked = 0;  // instances where hypotheses held and rule defined
  std::size_t vacuous = 0;  // skipped instances
  std::vector<Witness> witnesses;
};

// ---------------------------------------------------------------------------
// Game generators. Every mode certifies its defining property before
// returning and throws GeneratorExhausted if it cannot.

enum class GameMode {
  uniform,
  with_null_player,
  sign_stratified,
  intermediate_inessential,
  outside_v,
};

std::string_view to_string(GameMode mode);
std::optional<GameMode> mode_from_string(std::string_view name);

struct GameGenSpec {
  int n = 4;
  GameMode mode = GameMode::uniform;
  std::uint64_t seed = 0;
  /// sign_stratified only: sign of v(N)-v(empty) in {-1,+1} and sign of the
  /// singleton-marginal sum in {-1,0,+1}.
  int sign_total = +1;
  int sign_singletons = +1;
};

GameSnapshot generate_game(const GameGenSpec& spec);

/// Hypothesis pair for restricted differential marginality: conditions
/// (i)-(iii) hold for players i and j by construction.
struct RdmPair {
  GameSnapshot v, w;
  int i = 0, j = 1;
};
RdmPair generate_rdm_pair(int n, std::uint64_t seed);

/// Pair agreeing on coalition sizes {0,1,n-1,n}; for n >= 4 the games differ
/// on an interior coalition (alternating between a plain perturbation and a
/// perturbation of a null player's interior coalition).
struct ReductionPair {
  GameSnapshot v, w;
};
ReductionPair generate_reduction_pair(int n, std::uint64_t seed);

/// The interior rewiring used by the uniqueness proof: returns a game that
/// agrees with v on sizes {0,1,n-1,n} in which `player` (possible-null in v)
/// is a true null player. Requires n >= 4.
GameSnapshot nullify_interior(const GameSnapshot& v, int player);

/// True-null detection by scanning all marginals of a full snapshot.
std::vector<int> null_players(const GameSnapshot& snap, double tol);

// ---------------------------------------------------------------------------
// Executable axioms (tolerances relative, scaled by max(1, magnitude)).

struct SuiteConfig {
  int n = 5;
  std::size_t games = 1000;
  std::uint64_t seed = 1;
  double rel_tol = 1e-9;
  rules::Options rule_opts{};
};

/// Generator-backed suite for one axiom; the game family matches the axiom
/// (null-injected games, hypothesis pairs, ...).
Verdict check_axiom(AxiomId axiom, RuleId rule, const SuiteConfig& cfg);

/// Caller-supplied instances.
Verdict check_efficiency(RuleId rule, std::span<const GameSnapshot> games,
                         const SuiteConfig& cfg = {});
Verdict check_null_player(RuleId rule, std::span<const GameSnapshot> games,
                          const SuiteConfig& cfg = {});
Verdict check_rdm(RuleId rule, std::span<const RdmPair> pairs,
                  const SuiteConfig& cfg = {});
Verdict check_intermediate(RuleId rule, std::span<const GameSnapshot> games,
                           const SuiteConfig& cfg = {});
Verdict check_reduction(RuleId rule, std::span<const ReductionPair> pairs,
                        const SuiteConfig& cfg = {});

/// Order preservation: v(i)-v(empty) < v(j)-v(empty) implies
/// psi_i <= psi_j + 1e-12. Vacuous when the rule is undefined on the game.
Verdict check_order_preservation(RuleId rule, Game& game,
                                 const rules::Options& opts = {});

// ---------------------------------------------------------------------------
// Sign-case census over the (sign of total, sign of singleton-marginal sum)
// strata, reproducing the PA/RPA order-reversal table.

enum class CellMark { OK, X, NA, MAYBE };

struct CensusCell {
  std::size_t generated = 0;
  std::size_t defined = 0;
  std::size_t reversed = 0;
};

struct Table1Report {
  RuleId rule;
  int n = 0;
  CensusCell cells[2][3];    // [total sign + / -][singleton sum + / - / 0]
  CellMark expected[2][3];
  bool consistent = true;
  std::string detail;
};

CellMark expected_cell(RuleId rule, int row_total_sign, int col_singleton_sign);
Table1Report sign_case_census(RuleId rule, int n, std::size_t per_stratum,
                              std::uint64_t seed);

// ---------------------------------------------------------------------------
// Independent Shapley oracle and Harsanyi dividends.

/// Average marginal contribution over all n! player orderings (n <= 9);
/// deliberately a different algorithm than rules::exact_shap.
AttributionVector shapley_oracle(Game& game);

struct DividendTable {
  int n = 0;
  std::vector<double> lambda;  // indexed by coalition bitmask
  double at(const Coalition& s) const {
    return lambda[static_cast<std::size_t>(s.mask())];
  }
};

/// Moebius transform of v over the subset lattice (n <= 20).
DividendTable harsanyi_dividends(Game& game);
/// Reconstructs v(S) as the sum of dividends of subsets of S.
double reconstruct_value(const DividendTable& table, const Coalition& s);
bool null_by_dividends(const DividendTable& table, int player, double tol);

/// For v outside the domain V with v(N) != v(empty): certifies, by running
/// the interior rewiring for every player, that no rule can satisfy
/// efficiency, null player and reduction-in-complexity simultaneously.
struct ImpossibilityCheck {
  bool established = false;
  std::string detail;
};
ImpossibilityCheck check_outside_v_impossibility(const GameSnapshot& v,
                                                 double tol = 1e-12);

}  // namespace xaitu::verify

#endif
