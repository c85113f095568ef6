#include "xaitu/attribution.hpp"

#include <array>

namespace xaitu {

namespace {

constexpr std::array<RuleId, 19> kAllRules = {
    RuleId::SHAP,       RuleId::ES,          RuleId::ENSC,
    RuleId::ESENSC,     RuleId::ES_REV1,     RuleId::ENSC_REV1,
    RuleId::ESENSC_REV1, RuleId::ESENSC_REV2, RuleId::PA,
    RuleId::ROP,        RuleId::PAROP,       RuleId::RPA,
    RuleId::PARPA,      RuleId::GATELY_ADJ,  RuleId::PSI1,
    RuleId::PSI2,       RuleId::PSI3,        RuleId::PSI4,
    RuleId::PSI5,
};

constexpr std::array<std::string_view, 19> kRuleNames = {
    "SHAP", "ES",    "ENSC", "ESENSC", "ES_REV1", "ENSC_REV1", "ESENSC_REV1",
    "ESENSC_REV2",   "PA",   "ROP",    "PAROP",   "RPA",       "PARPA",
    "GATELY_ADJ",    "PSI1", "PSI2",   "PSI3",    "PSI4",      "PSI5",
};

}  // namespace

std::string_view to_string(RuleId rule) {
  return kRuleNames[static_cast<std::size_t>(rule)];
}

std::optional<RuleId> rule_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kRuleNames.size(); ++i)
    if (kRuleNames[i] == name) return kAllRules[i];
  return std::nullopt;
}

std::span<const RuleId> all_rules() { return kAllRules; }

std::string flags_to_string(unsigned flags) {
  std::string out;
  auto add = [&out](const char* name) {
    if (!out.empty()) out += '|';
    out += name;
  };
  if (flags & kRuleUndefined) add("rule_undefined");
  if (flags & kFallbackTaken) add("fallback_taken");
  if (flags & kDegenerateTotal) add("degenerate_total");
  return out;
}

double AttributionVector::sum() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

}  // namespace xaitu
