#pragma once

#include <map>
#include <string>
#include <vector>

#include "smactr/artifact.hpp"

namespace smactr {

struct AuditRepository;

/// Verbs that open a question answerable with yes/no. First-token heuristic.
const std::vector<std::string>& default_closed_question_verbs();

/// W_CLOSED_QUESTION for every prompt whose first word (case-insensitive,
/// leading punctuation and numbering skipped) is a closed-question verb.
/// Findings follow item order.
Diagnostics lint_questions(const DesignChecklist& checklist,
                           const std::vector<std::string>& closed_verbs = {});

struct ChecklistReport {
  int total = 0;
  int satisfied_count = 0;
  int not_applicable = 0;
  double completeness = 1.0;  // satisfied / (total - n/a); 1.0 when nothing applies
  std::vector<bool> satisfied;  // per item, in checklist order
  Diagnostics findings;
};

/// Kind -> whether at least one artifact of that kind is present and valid.
using Inventory = std::map<ArtifactKind, bool>;

/// Items with an expected artifact are decided by the inventory alone; the
/// rest by their `yes` answer. Claiming yes for a missing or invalid artifact
/// yields E_CHECKLIST_FALSE_CLAIM.
ChecklistReport verify_inventory(const DesignChecklist& checklist, const Inventory& inventory,
                                 const std::string& checklist_id = {});

ChecklistReport verify_inventory(const DesignChecklist& checklist, const std::string& checklist_id,
                                 const AuditRepository& repo);

}  // namespace smactr
