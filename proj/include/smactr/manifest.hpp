#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smactr/result.hpp"
#include "smactr/risk_matrix.hpp"
#include "smactr/types.hpp"

namespace smactr {

enum class Profile { full, light };
std::string_view to_string(Profile p);
std::optional<Profile> parse_profile(std::string_view text);

struct RequirementChange {
  ArtifactKind kind = ArtifactKind::PrinciplesDeclaration;
  Stage stage = Stage::Scoping;
  ArtifactStatus min_status = ArtifactStatus::final;
  bool operator==(const RequirementChange&) const = default;
};

/// Repository configuration, stored as manifest.json in the repository root.
struct Manifest {
  std::string audit_id;
  std::string product;
  Profile profile = Profile::full;
  std::string principles_file = "artifacts/scoping/principles.json";
  std::map<ArtifactKind, ProducerRole> role_overrides;
  std::vector<RequirementChange> add_requirements;
  std::vector<RequirementChange> remove_requirements;  // min_status ignored
  std::optional<RiskMatrix> risk_matrix;
  double skew_threshold = 4.0;
  std::optional<RiskClass> risk_acceptance_threshold;
  std::vector<std::string> closed_question_verbs;
  RiskClass verdict_trigger_class = RiskClass::high;

  RiskMatrix matrix() const { return risk_matrix.value_or(RiskMatrix::standard()); }
  ProducerRole producer_for(ArtifactKind k) const;

  bool operator==(const Manifest&) const = default;
};

Result<Manifest> parse_manifest(std::string_view text);
std::string serialize_manifest(const Manifest& manifest);

}  // namespace smactr
