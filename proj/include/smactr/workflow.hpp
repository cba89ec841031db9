#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "smactr/artifact.hpp"
#include "smactr/manifest.hpp"
#include "smactr/result.hpp"

namespace smactr {

struct AuditRepository;

struct RequiredArtifact {
  ArtifactKind kind = ArtifactKind::PrinciplesDeclaration;
  ProducerRole producer = ProducerRole::auditor;
  ArtifactStatus min_status = ArtifactStatus::final;
  bool operator==(const RequiredArtifact&) const = default;
};

using RequirementTable = std::map<Stage, std::vector<RequiredArtifact>>;

/// Per-stage requirements after applying the profile and manifest overrides.
/// E_CONFIG when a kind ends up required in two stages (the Fmea register may
/// appear twice: draft first, final later).
Result<RequirementTable> requirement_table(const Manifest& manifest);

Result<std::vector<RequiredArtifact>> required_artifacts(Stage stage, const Manifest& manifest);

/// Stage each kind is produced in: the earliest stage that requires it, or the
/// default stage for kinds the configuration does not require.
std::map<ArtifactKind, Stage> stage_assignment(const RequirementTable& table);

struct GateLogEntry {
  Stage stage = Stage::Scoping;
  std::string timestamp;
  std::string result = "pass";
  std::string diagnostics_hash;
  std::string inputs_hash;  // digest of (id, version, content hash) of every artifact at gate time
  std::vector<std::string> waivers;
  std::size_t history_length = 0;  // history records that precede this gate
  bool operator==(const GateLogEntry&) const = default;
};

struct WorkflowState {
  Stage current_stage = Stage::Scoping;
  std::vector<GateLogEntry> gate_log;
  bool operator==(const WorkflowState&) const = default;
};

Result<WorkflowState> parse_workflow_state(std::string_view text);
std::string serialize_workflow_state(const WorkflowState& state);

struct GateOptions {
  bool waive_checklist = false;
};

struct GateResult {
  bool pass = false;
  Diagnostics diagnostics;
};

/// Passes iff every artifact required by a stage strictly before `target`
/// exists at its minimum status, validates without errors and carries the
/// required producer role, and the stage-specific conditions hold:
///   entering Testing or later: checklist complete and truthful, FMEA scored;
///   entering Reflection: risk chart matches the register and every open
///   high risk is covered by a test case or carries a rationale.
GateResult check_gate(const AuditRepository& repo, Stage target, const GateOptions& options = {});

/// Gate past Reflection: everything above plus Reflection's own requirements.
/// Kinds listed in `exclude` are not required (the summary report uses this
/// to check its own preconditions).
GateResult check_completion(const AuditRepository& repo, const GateOptions& options = {},
                            const std::set<ArtifactKind>& exclude = {});

struct ArtifactVersion {
  std::string id;
  int version = 0;
  std::string hash;
  bool operator==(const ArtifactVersion&) const = default;
};

/// SHA-256 over the (id, version, content_hash) triples, sorted by id.
std::string inputs_hash(std::vector<ArtifactVersion> versions);
std::string inputs_hash(const AuditRepository& repo);

/// E_STAGE_SKIP unless target is the successor of the current stage;
/// E_GATE_FAILED (plus the gate's diagnostics) unless the gate passes.
Result<WorkflowState> advance_stage(const AuditRepository& repo, Stage target, const std::string& timestamp,
                                    const GateOptions& options = {});

}  // namespace smactr
