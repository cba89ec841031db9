#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "smactr/canonical.hpp"
#include "smactr/diagnostic.hpp"
#include "smactr/result.hpp"
#include "smactr/risk_matrix.hpp"
#include "smactr/types.hpp"

namespace smactr {

// Shared metadata header carried by every artifact file.
struct ArtifactMeta {
  std::string id;
  ArtifactKind kind = ArtifactKind::PrinciplesDeclaration;
  ProducerRole producer = ProducerRole::auditor;
  Stage stage = Stage::Scoping;
  int version = 1;
  std::string created_at;
  std::string content_hash;
  ArtifactStatus status = ArtifactStatus::draft;
  std::optional<std::string> supersedes;

  bool operator==(const ArtifactMeta&) const = default;
};

struct Principle {
  std::string id;
  std::string name;
  std::string description;
  std::string note;

  bool operator==(const Principle&) const = default;
};

struct PrinciplesDeclaration {
  std::string statement;
  std::vector<Principle> principles;
  bool operator==(const PrinciplesDeclaration&) const = default;
};

struct Requirement {
  std::string id;
  std::string text;
  std::vector<std::string> principles;
  bool operator==(const Requirement&) const = default;
};

struct ProductRequirementsDoc {
  std::string product;
  std::vector<Requirement> requirements;
  bool operator==(const ProductRequirementsDoc&) const = default;
};

enum class BoardDecision { approve, approve_with_conditions, reject };

struct ImpactedGroup {
  std::string group;
  std::string impact;
  bool operator==(const ImpactedGroup&) const = default;
};

struct Reviewer {
  std::string name;
  std::string affiliation;
  std::string standpoint;
  bool operator==(const Reviewer&) const = default;
};

struct EthicalReview {
  std::string use_case;
  std::vector<ImpactedGroup> impacted_groups;
  std::vector<Reviewer> reviewers;
  BoardDecision board_decision = BoardDecision::reject;
  std::vector<std::string> conditions;
  bool operator==(const EthicalReview&) const = default;
};

enum class ImpactCategory {
  ways_of_life,
  culture,
  community,
  political_systems,
  environment,
  health_wellbeing,
  rights,
  experiences
};

struct ImpactEntry {
  ImpactCategory category = ImpactCategory::ways_of_life;
  std::string description;
  int severity = 1;
  bool operator==(const ImpactEntry&) const = default;
};

struct SocialImpactAssessment {
  std::vector<ImpactEntry> impact_entries;
  int overall_severity = 1;
  bool operator==(const SocialImpactAssessment&) const = default;
};

struct Stakeholder {
  std::string name;
  std::string role;
  std::string contact;
  std::string contribution;
  bool operator==(const Stakeholder&) const = default;
};

struct StakeholderMap {
  std::vector<Stakeholder> stakeholders;
  bool operator==(const StakeholderMap&) const = default;
};

struct Interview {
  std::string role;
  std::string transcript_ref;
  std::vector<std::string> findings;
  bool operator==(const Interview&) const = default;
};

struct FieldStudyReport {
  std::vector<Interview> interviews;
  bool operator==(const FieldStudyReport&) const = default;
};

struct SystemComponent {
  std::string id;
  std::string name;
  std::string description;
  bool operator==(const SystemComponent&) const = default;
};

struct SystemFlow {
  std::string from;
  std::string to;
  std::string description;
  bool operator==(const SystemFlow&) const = default;
};

struct SystemMap {
  std::vector<SystemComponent> components;
  std::vector<SystemFlow> flows;
  bool operator==(const SystemMap&) const = default;
};

struct ReviewedDocument {
  std::string title;
  std::string ref;
  std::string summary;
  bool operator==(const ReviewedDocument&) const = default;
};

struct DesignDecision {
  std::string id;
  std::string date;
  std::string summary;
  bool operator==(const DesignDecision&) const = default;
};

struct DesignHistoryReview {
  std::vector<ReviewedDocument> documents;
  std::vector<DesignDecision> decisions;
  bool operator==(const DesignHistoryReview&) const = default;
};

enum class FmeaStatus { open, mitigated, accepted };

/// One failure mode. Severity and likelihood may be unset while the register
/// is still a Mapping-stage draft.
struct FmeaEntry {
  std::string id;
  std::string failure_mode;
  std::string effect;
  std::string cause;
  std::optional<int> severity;
  std::optional<int> likelihood;
  std::optional<int> detection;
  FmeaStatus status = FmeaStatus::open;
  std::vector<std::string> threatened_principles;
  std::vector<std::string> evidence_refs;
  std::string rationale;
  bool operator==(const FmeaEntry&) const = default;
};

/// Column order of the FMEA table as written to disk.
extern const std::vector<std::string_view> kFmeaColumns;

struct FmeaRegister {
  std::vector<FmeaEntry> entries;
  bool operator==(const FmeaRegister&) const = default;
};

enum class ChecklistAnswer { yes, no, not_applicable };

struct ChecklistItem {
  std::string id;
  std::string prompt;
  std::optional<ArtifactKind> expected_artifact;
  std::string response;
  ChecklistAnswer satisfied = ChecklistAnswer::no;
  std::string justification;
  bool operator==(const ChecklistItem&) const = default;
};

struct DesignChecklist {
  std::vector<ChecklistItem> items;
  bool operator==(const DesignChecklist&) const = default;
};

struct GroupPerformance {
  std::string group;
  std::string metric_name;
  double value = 0.0;
  bool operator==(const GroupPerformance&) const = default;
};

struct ModelCard {
  std::string model_name;
  std::string intended_use;
  std::vector<std::string> out_of_scope_uses;
  std::string evaluation_data;
  std::vector<GroupPerformance> performance_by_group;
  std::string limitations;
  bool operator==(const ModelCard&) const = default;
};

struct GroupFraction {
  std::string label;
  double fraction = 0.0;
  bool operator==(const GroupFraction&) const = default;
};

struct DemographicAxis {
  std::string axis;
  std::vector<GroupFraction> groups;
  bool operator==(const DemographicAxis&) const = default;
};

struct Datasheet {
  std::string dataset_name;
  std::string collection_process;
  TriState ethical_review_conducted = TriState::unknown;
  TriState relates_to_people = TriState::unknown;
  std::vector<DemographicAxis> demographic_breakdown;
  bool operator==(const Datasheet&) const = default;
};

/// Failure mode discovered by a test case whose target is `new`.
struct NewFailureMode {
  std::string id;
  std::string failure_mode;
  std::string effect;
  std::string cause;
  int severity = 1;
  std::vector<std::string> threatened_principles;
  bool operator==(const NewFailureMode&) const = default;
};

inline constexpr std::string_view kNewFmeaTarget = "new";

struct TestCase {
  std::string id;
  std::string target_fmea;  // an FMEA entry id, or "new"
  std::string description;
  std::string slice;
  int trials = 0;
  int failures = 0;
  std::optional<NewFailureMode> new_entry;
  bool operator==(const TestCase&) const = default;
};

struct AdversarialTestingReport {
  std::vector<TestCase> test_cases;
  bool operator==(const AdversarialTestingReport&) const = default;
};

struct ChartRow {
  std::string fmea_id;
  int severity = 1;
  int likelihood = 1;
  RiskClass risk_class = RiskClass::low;
  std::string rationale;
  bool operator==(const ChartRow&) const = default;
};

struct EthicalRiskChart {
  std::vector<ChartRow> rows;
  bool operator==(const EthicalRiskChart&) const = default;
};

/// under_inquiry: the team has not established that it can mitigate at all,
/// so the item does not count as a mitigation entry.
enum class MitigationStatus { planned, verified, infeasible, under_inquiry };

struct RemediationItem {
  std::string id;
  std::string fmea_id;
  std::string action;
  std::string owner;
  MitigationStatus status = MitigationStatus::planned;
  bool operator==(const RemediationItem&) const = default;
};

struct RemediationPlan {
  std::vector<RemediationItem> items;
  bool operator==(const RemediationPlan&) const = default;
};

struct PrincipleFinding {
  std::string principle;
  RiskClass worst_class = RiskClass::low;
  bool unexamined = false;
  std::vector<std::string> fmea_ids;
  bool operator==(const PrincipleFinding&) const = default;
};

struct AuditSummaryReport {
  Verdict verdict = Verdict::stall;
  std::vector<PrincipleFinding> principle_findings;
  int gap_errors = 0;
  int gap_warnings = 0;
  std::vector<std::string> gap_codes;
  double checklist_completeness = 0.0;
  std::vector<std::string> conditions;
  std::string adhf_hash;
  bool operator==(const AuditSummaryReport&) const = default;
};

// Alternatives are in ArtifactKind order, so body.index() == kind.
using ArtifactBody =
    std::variant<PrinciplesDeclaration, ProductRequirementsDoc, EthicalReview,
                 SocialImpactAssessment, StakeholderMap, FieldStudyReport, SystemMap,
                 DesignHistoryReview, FmeaRegister, DesignChecklist, ModelCard, Datasheet,
                 AdversarialTestingReport, EthicalRiskChart, RemediationPlan, AuditSummaryReport>;

static_assert(std::variant_size_v<ArtifactBody> == kArtifactKindCount);

ArtifactBody empty_body(ArtifactKind kind);

struct ArtifactDocument {
  ArtifactMeta meta;
  ArtifactBody body;
  /// Requirement or decision ids this artifact provides evidence for.
  std::vector<std::string> evidences;

  ArtifactKind kind() const { return static_cast<ArtifactKind>(body.index()); }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&body);
  }
  template <class T>
  T* as() {
    return std::get_if<T>(&body);
  }

  bool operator==(const ArtifactDocument&) const = default;
};

// ---------------------------------------------------------------------------
// Serialization

json body_to_json(const ArtifactDocument& doc);
json meta_to_json(const ArtifactMeta& meta);
std::string canonical_body(const ArtifactDocument& doc);
std::string compute_content_hash(const ArtifactDocument& doc);

/// Sets meta.kind from the body and meta.content_hash from the canonical body.
ArtifactDocument& seal(ArtifactDocument& doc);

/// Pretty-printed document file text. Always writes the recomputed hash.
std::string serialize_artifact(const ArtifactDocument& doc);

struct ParseOptions {
  std::optional<ArtifactKind> expected_kind;
  bool verify_hash = true;
};

Result<ArtifactDocument> parse_artifact(std::string_view raw_document,
                                        std::optional<ArtifactKind> expected_kind = std::nullopt);
Result<ArtifactDocument> parse_artifact(std::string_view raw_document, const ParseOptions& options);

// ---------------------------------------------------------------------------
// Validation

/// Everything validation needs besides the artifact itself. Built from the
/// manifest by the repository; the defaults match a fresh manifest.
struct ValidationContext {
  std::vector<Principle> principles;
  double skew_threshold = 4.0;
  double fraction_tolerance = 0.02;
  RiskMatrix risk_matrix = RiskMatrix::standard();
  std::vector<std::string> closed_question_verbs;  // empty = built-in list
  std::map<ArtifactKind, Stage> stage_of;          // missing kinds use default_stage
};

Diagnostics validate_artifact(const ArtifactDocument& artifact, const ValidationContext& context);

/// Convenience overload with default settings.
Diagnostics validate_artifact(const ArtifactDocument& artifact,
                              const std::vector<Principle>& principles);

bool is_iso8601_timestamp(std::string_view text);

std::string_view to_string(BoardDecision d);
std::string_view to_string(ImpactCategory c);
std::string_view to_string(FmeaStatus s);
std::string_view to_string(ChecklistAnswer a);
std::string_view to_string(MitigationStatus s);

}  // namespace smactr
