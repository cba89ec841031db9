#include "smactr/types.hpp"

#include <algorithm>
#include <cctype>

namespace smactr {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

template <class E, std::size_t N>
std::optional<E> find_by_name(std::string_view text, const std::array<E, N>& all) {
  for (E e : all) {
    if (to_string(e) == text) return e;
  }
  return std::nullopt;
}

}  // namespace

const std::array<ArtifactKind, kArtifactKindCount> kAllKinds = {
    ArtifactKind::PrinciplesDeclaration,   ArtifactKind::ProductRequirementsDoc,
    ArtifactKind::EthicalReview,           ArtifactKind::SocialImpactAssessment,
    ArtifactKind::StakeholderMap,          ArtifactKind::FieldStudyReport,
    ArtifactKind::SystemMap,               ArtifactKind::DesignHistoryReview,
    ArtifactKind::Fmea,                    ArtifactKind::DesignChecklist,
    ArtifactKind::ModelCard,               ArtifactKind::Datasheet,
    ArtifactKind::AdversarialTestingReport, ArtifactKind::EthicalRiskChart,
    ArtifactKind::RemediationPlan,         ArtifactKind::AuditSummaryReport,
};

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::Scoping: return "Scoping";
    case Stage::Mapping: return "Mapping";
    case Stage::ArtifactCollection: return "ArtifactCollection";
    case Stage::Testing: return "Testing";
    case Stage::Reflection: return "Reflection";
  }
  return "?";
}

std::string_view stage_dir(Stage s) {
  switch (s) {
    case Stage::Scoping: return "scoping";
    case Stage::Mapping: return "mapping";
    case Stage::ArtifactCollection: return "artifact_collection";
    case Stage::Testing: return "testing";
    case Stage::Reflection: return "reflection";
  }
  return "?";
}

std::optional<Stage> parse_stage(std::string_view text) {
  const std::string t = lower(text);
  for (Stage s : kAllStages) {
    if (lower(to_string(s)) == t || stage_dir(s) == t) return s;
  }
  if (t == "artifact-collection") return Stage::ArtifactCollection;
  return std::nullopt;
}

std::optional<Stage> successor(Stage s) {
  if (s == Stage::Reflection) return std::nullopt;
  return static_cast<Stage>(stage_index(s) + 1);
}

std::string_view to_string(ArtifactKind k) {
  switch (k) {
    case ArtifactKind::PrinciplesDeclaration: return "PrinciplesDeclaration";
    case ArtifactKind::ProductRequirementsDoc: return "ProductRequirementsDoc";
    case ArtifactKind::EthicalReview: return "EthicalReview";
    case ArtifactKind::SocialImpactAssessment: return "SocialImpactAssessment";
    case ArtifactKind::StakeholderMap: return "StakeholderMap";
    case ArtifactKind::FieldStudyReport: return "FieldStudyReport";
    case ArtifactKind::SystemMap: return "SystemMap";
    case ArtifactKind::DesignHistoryReview: return "DesignHistoryReview";
    case ArtifactKind::Fmea: return "Fmea";
    case ArtifactKind::DesignChecklist: return "DesignChecklist";
    case ArtifactKind::ModelCard: return "ModelCard";
    case ArtifactKind::Datasheet: return "Datasheet";
    case ArtifactKind::AdversarialTestingReport: return "AdversarialTestingReport";
    case ArtifactKind::EthicalRiskChart: return "EthicalRiskChart";
    case ArtifactKind::RemediationPlan: return "RemediationPlan";
    case ArtifactKind::AuditSummaryReport: return "AuditSummaryReport";
  }
  return "?";
}

std::optional<ArtifactKind> parse_kind(std::string_view text) {
  return find_by_name(text, kAllKinds);
}

std::string_view to_string(ProducerRole r) {
  switch (r) {
    case ProducerRole::auditor: return "auditor";
    case ProducerRole::product_team: return "product_team";
    case ProducerRole::joint: return "joint";
  }
  return "?";
}

std::optional<ProducerRole> parse_producer(std::string_view text) {
  constexpr std::array all = {ProducerRole::auditor, ProducerRole::product_team,
                              ProducerRole::joint};
  return find_by_name(text, all);
}

ProducerRole default_producer(ArtifactKind k) {
  switch (k) {
    case ArtifactKind::RemediationPlan:
      return ProducerRole::joint;
    case ArtifactKind::PrinciplesDeclaration:
    case ArtifactKind::ProductRequirementsDoc:
    case ArtifactKind::ModelCard:
    case ArtifactKind::Datasheet:
    case ArtifactKind::SystemMap:
    case ArtifactKind::DesignHistoryReview:
      return ProducerRole::product_team;
    default:
      return ProducerRole::auditor;
  }
}

Stage default_stage(ArtifactKind k) {
  switch (k) {
    case ArtifactKind::PrinciplesDeclaration:
    case ArtifactKind::ProductRequirementsDoc:
    case ArtifactKind::EthicalReview:
    case ArtifactKind::SocialImpactAssessment:
      return Stage::Scoping;
    case ArtifactKind::StakeholderMap:
    case ArtifactKind::FieldStudyReport:
    case ArtifactKind::SystemMap:
    case ArtifactKind::DesignHistoryReview:
    case ArtifactKind::Fmea:
      return Stage::Mapping;
    case ArtifactKind::DesignChecklist:
    case ArtifactKind::ModelCard:
    case ArtifactKind::Datasheet:
      return Stage::ArtifactCollection;
    case ArtifactKind::AdversarialTestingReport:
    case ArtifactKind::EthicalRiskChart:
      return Stage::Testing;
    case ArtifactKind::RemediationPlan:
    case ArtifactKind::AuditSummaryReport:
      return Stage::Reflection;
  }
  return Stage::Scoping;
}

std::string_view to_string(ArtifactStatus s) {
  return s == ArtifactStatus::draft ? "draft" : "final";
}

std::optional<ArtifactStatus> parse_status(std::string_view text) {
  if (text == "draft") return ArtifactStatus::draft;
  if (text == "final") return ArtifactStatus::final;
  return std::nullopt;
}

std::string_view to_string(TriState t) {
  switch (t) {
    case TriState::yes: return "yes";
    case TriState::no: return "no";
    case TriState::unknown: return "unknown";
  }
  return "?";
}

std::optional<TriState> parse_tristate(std::string_view text) {
  constexpr std::array all = {TriState::yes, TriState::no, TriState::unknown};
  return find_by_name(text, all);
}

std::string_view to_string(RiskClass c) {
  switch (c) {
    case RiskClass::low: return "low";
    case RiskClass::mid: return "mid";
    case RiskClass::high: return "high";
  }
  return "?";
}

std::optional<RiskClass> parse_risk_class(std::string_view text) {
  constexpr std::array all = {RiskClass::low, RiskClass::mid, RiskClass::high};
  return find_by_name(text, all);
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::greenlight: return "greenlight";
    case Verdict::conditional_greenlight: return "conditional_greenlight";
    case Verdict::stall: return "stall";
    case Verdict::cancel: return "cancel";
  }
  return "?";
}

std::optional<Verdict> parse_verdict(std::string_view text) {
  constexpr std::array all = {Verdict::greenlight, Verdict::conditional_greenlight,
                              Verdict::stall, Verdict::cancel};
  return find_by_name(text, all);
}

std::string_view severity_label(int level) {
  static constexpr std::array<std::string_view, 5> kLabels = {
      "negligible", "minor", "moderate", "major", "catastrophic"};
  return in_scale(level) ? kLabels[level - 1] : "out_of_range";
}

std::string_view likelihood_label(int level) {
  static constexpr std::array<std::string_view, 5> kLabels = {
      "rare", "unlikely", "possible", "likely", "almost_certain"};
  return in_scale(level) ? kLabels[level - 1] : "out_of_range";
}

}  // namespace smactr
