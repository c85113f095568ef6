#ifndef XAITU_ATTRIBUTION_HPP
#define XAITU_ATTRIBUTION_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace xaitu {

/// Closed-form attribution rules plus the five axiom-independence
/// counterexample rules psi1..psi5.
enum class RuleId {
  SHAP,
  ES,
  ENSC,
  ESENSC,
  ES_REV1,
  ENSC_REV1,
  ESENSC_REV1,
  ESENSC_REV2,
  PA,
  ROP,
  PAROP,
  RPA,
  PARPA,
  GATELY_ADJ,
  PSI1,
  PSI2,
  PSI3,
  PSI4,
  PSI5,
};

std::string_view to_string(RuleId rule);
std::optional<RuleId> rule_from_string(std::string_view name);
std::span<const RuleId> all_rules();

enum AttributionFlag : unsigned {
  kRuleUndefined = 1u,    // preconditions failed; values are all-NaN
  kFallbackTaken = 2u,    // a dispatch fallback fired (Gately -> PA/ROP, alpha=1/2)
  kDegenerateTotal = 4u,  // v(N)=v(empty) outside the rule's domain; zeros returned
};

std::string flags_to_string(unsigned flags);

/// Per-feature attributions for one observation, together with the identity
/// of the producing method and its measured cost.
struct AttributionVector {
  std::vector<double> values;
  std::string method;                // stable rule/estimator name for reports
  std::uint64_t evals_used = 0;      // distinct coalition evaluations consumed
  std::uint64_t model_calls = 0;     // raw predictor invocations consumed
  double elapsed_seconds = 0.0;
  unsigned flags = 0;
  std::optional<double> alpha;       // Gately mixing parameter when applicable

  bool undefined() const { return (flags & kRuleUndefined) != 0; }
  double sum() const;
};

}  // namespace xaitu

#endif
