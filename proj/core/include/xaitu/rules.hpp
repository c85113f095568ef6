#ifndef XAITU_RULES_HPP
#define XAITU_RULES_HPP

#include "xaitu/attribution.hpp"
#include "xaitu/game.hpp"

namespace xaitu::rules {

struct Options {
  /// Scale of the absolute tolerance used for the "possible null player"
  /// equality tests v(j)=v(empty), v(N)=v(N\j); the effective tolerance is
  /// zero_tol_scale * max(1, |v(N)-v(empty)|).
  double zero_tol_scale = 1e-12;
  /// Lifts the n <= 25 guard on full power-set enumeration.
  bool force_exact = false;
};

/// Practical ceiling for 2^n enumeration; override with Options::force_exact.
inline constexpr int kExactShapMaxPlayers = 25;

/// Exact Shapley value by subset enumeration: 2^n coalition evaluations.
AttributionVector exact_shap(Game& game, const Options& opts = {});

/// Equal-surplus family. Accepts ES, ENSC, ESENSC, ES_REV1, ENSC_REV1,
/// ESENSC_REV1, ESENSC_REV2.
AttributionVector es_family(RuleId rule, Game& game, const Options& opts = {});

/// Proportional family. Accepts PA, ROP, PAROP, RPA, PARPA.
AttributionVector pa_family(RuleId rule, Game& game, const Options& opts = {});

/// Efficiency-calibrated convex mix of the two marginal-contribution
/// vectors, falling back to PA (alpha > 1) or ROP (alpha < 0).
AttributionVector gately_adjusted(Game& game, const Options& opts = {});

/// The axiom-independence rules psi1..psi5. PSI5 needs full power-set
/// access to decide true null players and carries the exact-SHAP guard.
AttributionVector counterexample_rule(RuleId rule, Game& game,
                                      const Options& opts = {});

/// Dispatch by rule id.
AttributionVector attribute(RuleId rule, Game& game, const Options& opts = {});

}  // namespace xaitu::rules

#endif
