#include "smactr/diagnostic.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace smactr {

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::error: return "error";
    case Severity::warning: return "warning";
    case Severity::info: return "info";
  }
  return "?";
}

const std::vector<CodeInfo>& code_registry() {
  using S = Severity;
  static const std::vector<CodeInfo> kRegistry = {
      // documents
      {"E_PARSE", S::error, "document is not well-formed"},
      {"E_KIND_MISMATCH", S::error, "document kind differs from the expected kind"},
      {"E_UNKNOWN_FIELD", S::error, "field not defined by the schema"},
      {"E_MISSING_FIELD", S::error, "required field absent"},
      {"E_BAD_VALUE", S::error, "field has the wrong type or an unknown enum value"},
      {"E_HASH_MISMATCH", S::error, "content_hash does not match the canonical body"},
      {"E_META", S::error, "metadata header invariant violated"},
      {"E_DUPLICATE_ID", S::error, "id used more than once"},
      {"E_ID_MISMATCH", S::error, "file name does not match the artifact id"},
      {"E_STAGE_MISMATCH", S::error, "artifact stage differs from the stage assigned to its kind"},
      {"E_UNKNOWN_PRINCIPLE", S::error, "reference to a principle id that is not declared"},
      {"E_PRINCIPLES_EMPTY", S::error, "at least one principle is required"},
      {"E_RANGE", S::error, "ordinal value outside 1..5"},
      {"E_EMPTY_TEXT", S::error, "required text is empty"},
      // kind-specific
      {"E_ER_IMPACTED_GROUPS", S::error, "ethical review lists no impacted groups"},
      {"E_ER_STANDPOINTS", S::error, "approval needs reviewers from at least two standpoints"},
      {"E_SIA_EMPTY", S::error, "social impact assessment has no entries"},
      {"E_SIA_OVERALL", S::error, "overall severity is not the maximum entry severity"},
      {"E_MC_INTENDED_USE", S::error, "model card intended use is empty"},
      {"E_MC_PERF_NONFINITE", S::error, "performance value is not finite"},
      {"E_DS_COLLECTION", S::error, "datasheet collection process is empty"},
      {"E_DS_FRACTION_RANGE", S::error, "group fraction outside [0,1]"},
      {"E_DS_FRACTION_SUM", S::error, "axis fractions do not sum to 1 within tolerance"},
      {"W_DS_SKEW", S::warning, "demographic axis is skewed beyond the configured ratio"},
      {"E_SM_EMPTY", S::error, "stakeholder map lists nobody"},
      {"E_FS_EMPTY", S::error, "field study has no interviews"},
      {"E_SYS_EMPTY", S::error, "system map has no components"},
      {"E_SYS_FLOW_REF", S::error, "flow references an unknown component"},
      {"E_CL_PROMPT", S::error, "checklist prompt is empty"},
      {"E_CL_JUSTIFICATION", S::error, "n/a checklist item lacks a justification"},
      {"E_FMEA_NO_PRINCIPLE", S::error, "failure mode threatens no principle"},
      {"E_ATR_TRIALS", S::error, "test case trial counts are inconsistent"},
      {"E_ATR_NEW_ENTRY", S::error, "test case targeting `new` lacks a well-formed new entry"},
      {"E_ERC_CLASS", S::error, "chart row class differs from the risk matrix"},
      {"E_RP_EMPTY", S::error, "remediation item has no action"},
      // workflow
      {"E_CONFIG", S::error, "manifest configuration is invalid or contradictory"},
      {"E_GATE_MISSING", S::error, "required artifact is absent"},
      {"E_GATE_STATUS", S::error, "required artifact has not reached the minimum status"},
      {"E_GATE_INVALID", S::error, "required artifact fails validation"},
      {"E_GATE_PRODUCER", S::error, "required artifact has the wrong producer role"},
      {"E_GATE_CHECKLIST", S::error, "design checklist is incomplete"},
      {"E_GATE_FAILED", S::error, "gate check did not pass"},
      {"E_STAGE_SKIP", S::error, "target is not the immediate successor stage"},
      {"E_FMEA_UNSCORED", S::error, "failure mode lacks severity or likelihood"},
      {"E_ERC_MISSING_ROW", S::error, "open failure mode has no risk chart row"},
      {"E_ERC_STALE", S::error, "risk chart row disagrees with the register"},
      {"E_UNTESTED_RISK", S::error, "open high risk has neither a covering test nor a rationale"},
      // risk
      {"E_UNKNOWN_FMEA_ID", S::error, "test case names a failure mode that does not exist"},
      {"E_UNCLASSIFIED", S::error, "failure mode cannot be classified"},
      // checklist
      {"E_CHECKLIST_FALSE_CLAIM", S::error, "item claims yes but the expected artifact is missing or invalid"},
      {"W_EMPTY_CHECKLIST", S::warning, "checklist has no applicable items"},
      {"W_CLOSED_QUESTION", S::warning, "prompt invites a yes/no answer"},
      // trace
      {"E_DANGLING_REF", S::error, "cross-reference to an unknown id"},
      {"E_SUPERSEDES_CYCLE", S::error, "supersedes chain forms a cycle"},
      {"E_HISTORY_GAP", S::error, "artifact history does not account for the current content"},
      {"W_UNTESTED_RISK", S::warning, "open high risk has no exercising test case"},
      {"W_UNMITIGATED_FAILURE", S::warning, "failed test case has no mitigation path"},
      {"W_UNEXAMINED_PRINCIPLE", S::warning, "principle is neither threatened nor derived from"},
      {"E_ORPHAN_REQUIREMENT", S::error, "requirement has no evidencing artifact"},
      // report / repository
      {"E_MISSING_REMEDIATION", S::error, "remediation plan absent at Reflection"},
      {"E_EXISTS", S::error, "target directory is not empty"},
      {"E_LOCKED", S::error, "another writer holds the repository lock"},
      {"E_IO", S::error, "file system operation failed"},
      {"I_WAIVED", S::info, "gate condition waived"},
  };
  return kRegistry;
}

const CodeInfo& lookup_code(std::string_view code) {
  const auto& reg = code_registry();
  auto it = std::find_if(reg.begin(), reg.end(), [&](const CodeInfo& c) { return c.code == code; });
  if (it == reg.end()) throw std::logic_error("unregistered diagnostic code: " + std::string(code));
  return *it;
}

Diagnostic make_diag(std::string_view code, std::string artifact_id, std::string path,
                     std::string message) {
  const CodeInfo& info = lookup_code(code);
  return Diagnostic{std::string(info.code), info.severity, std::move(artifact_id), std::move(path),
                    std::move(message)};
}

void sort_diagnostics(Diagnostics& diags) {
  auto key = [](const Diagnostic& d) {
    return std::tie(d.artifact_id, d.path, d.code, d.message);
  };
  std::sort(diags.begin(), diags.end(),
            [&](const Diagnostic& a, const Diagnostic& b) { return key(a) < key(b); });
  diags.erase(std::unique(diags.begin(), diags.end()), diags.end());
}

bool has_errors(const Diagnostics& diags) {
  return count_severity(diags, Severity::error) > 0;
}

std::size_t count_severity(const Diagnostics& diags, Severity s) {
  return static_cast<std::size_t>(
      std::count_if(diags.begin(), diags.end(), [s](const Diagnostic& d) { return d.severity == s; }));
}

namespace {

std::string one_line(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(c == '\n' || c == '\r' || c == '\t' ? ' ' : c);
  return out;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(c >= 'a' && c <= 'z' ? c - 32 : c);
  return out;
}

}  // namespace

std::string format_machine(const Diagnostics& diags) {
  std::ostringstream os;
  for (const auto& d : diags) {
    os << upper(to_string(d.severity)) << ' ' << d.code << ' '
       << (d.artifact_id.empty() ? "-" : one_line(d.artifact_id)) << ' '
       << (d.path.empty() ? "-" : one_line(d.path)) << ' ' << one_line(d.message) << '\n';
  }
  return os.str();
}

std::string format_text(const Diagnostics& diags) {
  std::ostringstream os;
  for (const auto& d : diags) {
    os << to_string(d.severity) << '[' << d.code << "] ";
    if (!d.artifact_id.empty()) {
      os << d.artifact_id;
      if (!d.path.empty()) os << ':' << d.path;
      os << ": ";
    }
    os << one_line(d.message) << '\n';
  }
  return os.str();
}

void append(Diagnostics& into, const Diagnostics& from) {
  into.insert(into.end(), from.begin(), from.end());
}

}  // namespace smactr
