#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace smactr {

/// The five audit stages, in their fixed order.
enum class Stage { Scoping, Mapping, ArtifactCollection, Testing, Reflection };

inline constexpr std::array<Stage, 5> kAllStages = {
    Stage::Scoping, Stage::Mapping, Stage::ArtifactCollection, Stage::Testing,
    Stage::Reflection};

std::string_view to_string(Stage s);
/// Directory name under artifacts/, e.g. "artifact_collection".
std::string_view stage_dir(Stage s);
/// Accepts the display name or the directory name, case-insensitively.
std::optional<Stage> parse_stage(std::string_view text);
std::optional<Stage> successor(Stage s);
inline int stage_index(Stage s) { return static_cast<int>(s); }

enum class ArtifactKind {
  PrinciplesDeclaration,
  ProductRequirementsDoc,
  EthicalReview,
  SocialImpactAssessment,
  StakeholderMap,
  FieldStudyReport,
  SystemMap,
  DesignHistoryReview,
  Fmea,
  DesignChecklist,
  ModelCard,
  Datasheet,
  AdversarialTestingReport,
  EthicalRiskChart,
  RemediationPlan,
  AuditSummaryReport,
};

inline constexpr std::size_t kArtifactKindCount = 16;
extern const std::array<ArtifactKind, kArtifactKindCount> kAllKinds;

std::string_view to_string(ArtifactKind k);
std::optional<ArtifactKind> parse_kind(std::string_view text);

enum class ProducerRole { auditor, product_team, joint };
std::string_view to_string(ProducerRole r);
std::optional<ProducerRole> parse_producer(std::string_view text);

/// Which party authors a kind unless the manifest overrides it.
ProducerRole default_producer(ArtifactKind k);
/// The stage a kind is produced in under the default requirements.
Stage default_stage(ArtifactKind k);

enum class ArtifactStatus { draft, final };
std::string_view to_string(ArtifactStatus s);
std::optional<ArtifactStatus> parse_status(std::string_view text);

enum class TriState { yes, no, unknown };
std::string_view to_string(TriState t);
std::optional<TriState> parse_tristate(std::string_view text);

/// Ethical risk class; ordered low < mid < high.
enum class RiskClass { low, mid, high };
std::string_view to_string(RiskClass c);
std::optional<RiskClass> parse_risk_class(std::string_view text);

/// Launch recommendation; ordered greenlight < conditional < stall < cancel.
enum class Verdict { greenlight, conditional_greenlight, stall, cancel };
std::string_view to_string(Verdict v);
std::optional<Verdict> parse_verdict(std::string_view text);

/// 1..5 ordinal scales. Kept as plain ints in documents; range-checked by
/// validation rather than by the parser.
inline constexpr int kScaleMin = 1;
inline constexpr int kScaleMax = 5;
inline bool in_scale(int v) { return v >= kScaleMin && v <= kScaleMax; }
std::string_view severity_label(int level);    // negligible .. catastrophic
std::string_view likelihood_label(int level);  // rare .. almost_certain

}  // namespace smactr
