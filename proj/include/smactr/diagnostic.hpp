#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace smactr {

enum class Severity { error, warning, info };

std::string_view to_string(Severity s);

/// Machine-readable finding. Every validation pass in the library reports
/// through this type; `code` must be one of the registered codes.
struct Diagnostic {
  std::string code;
  Severity severity = Severity::error;
  std::string artifact_id;  // empty when the finding is repository-wide
  std::string path;         // field path inside the document, e.g. body.rows[2].risk_class
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

struct CodeInfo {
  std::string_view code;
  Severity severity;
  std::string_view summary;
};

/// The published registry of diagnostic codes.
const std::vector<CodeInfo>& code_registry();

/// Looks up `code` in the registry; throws std::logic_error for codes that are
/// not registered, so a typo can never leak into output.
const CodeInfo& lookup_code(std::string_view code);

Diagnostic make_diag(std::string_view code, std::string artifact_id, std::string path,
                     std::string message);

using Diagnostics = std::vector<Diagnostic>;

/// Sorts by (artifact_id, path, code, message) and drops exact duplicates.
void sort_diagnostics(Diagnostics& diags);

bool has_errors(const Diagnostics& diags);
std::size_t count_severity(const Diagnostics& diags, Severity s);

/// `SEVERITY CODE artifact_id path message`, one per line, newline-terminated.
/// Empty artifact ids and paths are written as `-`.
std::string format_machine(const Diagnostics& diags);
std::string format_text(const Diagnostics& diags);

void append(Diagnostics& into, const Diagnostics& from);

}  // namespace smactr
