#pragma once

#include <string>
#include <vector>

#include "smactr/artifact.hpp"
#include "smactr/manifest.hpp"
#include "smactr/risk.hpp"
#include "smactr/trace.hpp"
#include "smactr/workflow.hpp"

namespace smactr {

struct AuditRepository;

struct VerdictAssessment {
  Verdict verdict = Verdict::greenlight;
  std::vector<std::string> reasons;  // one line per risk or gap that shaped the verdict
};

/// Among open risks at or above `trigger` class:
///   cancel      some risk has an infeasible remediation item;
///   stall       some risk has no planned or verified item;
///   conditional some such risk remains open, or gaps include errors;
///   greenlight  otherwise.
/// E_MISSING_REMEDIATION when `plan` is null.
Result<VerdictAssessment> assess_verdict(const RiskRegister& reg, const Diagnostics& gaps, const RemediationPlan* plan,
                                         const RiskMatrix& matrix = RiskMatrix::standard(),
                                         RiskClass trigger = RiskClass::high);

Result<Verdict> determine_verdict(const RiskRegister& reg, const Diagnostics& gaps, const RemediationPlan* plan,
                                  const RiskMatrix& matrix = RiskMatrix::standard(),
                                  RiskClass trigger = RiskClass::high);

struct TestLine {
  std::string report_id;
  TestCase test;
};

struct SummaryReport {
  std::string audit_id;
  std::string product;
  Profile profile = Profile::full;
  Stage stage = Stage::Scoping;
  std::vector<Principle> principles;
  std::size_t requirement_count = 0;
  std::vector<Stakeholder> stakeholders;
  std::vector<FmeaEntry> risks;  // prioritized
  RiskMatrix matrix = RiskMatrix::standard();
  std::vector<TestLine> tests;
  Diagnostics gaps;
  VerdictAssessment verdict;
  AuditSummaryReport summary;
  std::vector<std::string> waivers;
  std::string repo_hash;
  std::vector<ArtifactVersion> inputs;  // every artifact except summary reports
};

/// Assembles the report. Requires everything the final gate requires except
/// the summary report itself; otherwise returns those gate diagnostics.
Result<SummaryReport> compile_report(const AuditRepository& repo);

/// Plain-text report with sections scope, stakeholders, risks, tests, gaps,
/// verdict, conditions, integrity.
std::string render_report(const SummaryReport& report);

/// The report as an AuditSummaryReport artifact.
ArtifactDocument report_artifact(const SummaryReport& report, const std::string& id, int version,
                                 const std::string& created_at);

}  // namespace smactr
