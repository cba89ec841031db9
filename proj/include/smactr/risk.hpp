#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smactr/artifact.hpp"
#include "smactr/risk_matrix.hpp"

namespace smactr {

using RiskRegister = FmeaRegister;

/// E_RANGE when either input is outside 1..5.
Result<RiskClass> classify_risk(int severity, int likelihood,
                                const RiskMatrix& matrix = RiskMatrix::standard());

/// Class of a scored entry; nullopt while severity or likelihood is unset or out of range.
std::optional<RiskClass> entry_class(const FmeaEntry& entry, const RiskMatrix& matrix);

/// Highest class first, then severity*likelihood, then severity; ties by id.
/// E_UNCLASSIFIED if any entry cannot be classified.
Result<std::vector<FmeaEntry>> prioritize_risks(const RiskRegister& reg,
                                                const RiskMatrix& matrix = RiskMatrix::standard());

/// Likelihood implied by an observed failure rate. A clean run (f == 0)
/// decays the prior by one step instead of resetting it.
int likelihood_from_failure_rate(double failure_rate, std::optional<int> prior);

struct RiskDelta {
  std::string fmea_id;
  std::optional<RiskClass> old_class;  // nullopt: entry was new or unscored
  std::optional<RiskClass> new_class;
  bool operator==(const RiskDelta&) const = default;
};

struct TestIngestion {
  RiskRegister updated;
  std::vector<RiskDelta> deltas;  // sorted by fmea_id
};

/// Re-estimates likelihoods from a test report. Named entries pool all test
/// cases that target them; `new` cases append open entries. Entries are never
/// removed. `report_id` is appended to evidence_refs of every touched entry.
Result<TestIngestion> update_fmea_with_tests(const RiskRegister& reg,
                                             const AdversarialTestingReport& report,
                                             const std::string& report_id = {},
                                             const RiskMatrix& matrix = RiskMatrix::standard());

/// `fmea_id old→new` per line; `-` stands for no class.
std::string format_deltas(const std::vector<RiskDelta>& deltas);

struct PrincipleThreat {
  RiskClass worst = RiskClass::low;
  bool unexamined = true;
  std::vector<std::string> fmea_ids;  // open, classified entries that threaten it
  bool operator==(const PrincipleThreat&) const = default;
};

std::map<std::string, PrincipleThreat> assess_principle_threats(
    const RiskRegister& reg, const std::vector<Principle>& principles,
    const RiskMatrix& matrix = RiskMatrix::standard());

/// Chart with one row per open, scored entry, ordered by fmea id.
EthicalRiskChart generate_chart(const RiskRegister& reg,
                                const RiskMatrix& matrix = RiskMatrix::standard());

/// Cross-checks a chart against the register it should reflect.
Diagnostics check_chart_consistency(const EthicalRiskChart& chart, const std::string& chart_id,
                                    const RiskRegister& reg, const RiskMatrix& matrix);

}  // namespace smactr
