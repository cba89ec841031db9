#include "smactr/checklist.hpp"

#include <algorithm>
#include <cctype>

#include "smactr/repository.hpp"

namespace smactr {

const std::vector<std::string>& default_closed_question_verbs() {
  static const std::vector<std::string> kVerbs = {"is",    "are",    "was",   "were", "do",
                                                  "does",  "did",    "can",   "could", "will",
                                                  "would", "should", "has",   "have", "had"};
  return kVerbs;
}

namespace {

std::string first_token(std::string_view prompt) {
  std::size_t i = 0;
  while (i < prompt.size() && !std::isalpha(static_cast<unsigned char>(prompt[i]))) ++i;
  std::string tok;
  while (i < prompt.size() && std::isalnum(static_cast<unsigned char>(prompt[i]))) {
    tok.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(prompt[i]))));
    ++i;
  }
  return tok;
}

}  // namespace

Diagnostics lint_questions(const DesignChecklist& checklist, const std::vector<std::string>& closed_verbs) {
  const auto& verbs = closed_verbs.empty() ? default_closed_question_verbs() : closed_verbs;
  Diagnostics out;
  for (std::size_t i = 0; i < checklist.items.size(); ++i) {
    const std::string tok = first_token(checklist.items[i].prompt);
    if (std::find(verbs.begin(), verbs.end(), tok) != verbs.end()) {
      out.push_back(make_diag("W_CLOSED_QUESTION", "", "body.items[" + std::to_string(i) + "].prompt",
                              "'" + checklist.items[i].id + "' starts with '" + tok +
                                  "'; ask the team to describe instead"));
    }
  }
  return out;
}

ChecklistReport verify_inventory(const DesignChecklist& checklist, const Inventory& inventory,
                                 const std::string& checklist_id) {
  ChecklistReport report;
  report.total = static_cast<int>(checklist.items.size());
  for (std::size_t i = 0; i < checklist.items.size(); ++i) {
    const ChecklistItem& item = checklist.items[i];
    bool ok = false;
    if (item.satisfied == ChecklistAnswer::not_applicable) {
      ++report.not_applicable;
    } else if (item.expected_artifact) {
      auto it = inventory.find(*item.expected_artifact);
      ok = it != inventory.end() && it->second;
      if (!ok && item.satisfied == ChecklistAnswer::yes) {
        report.findings.push_back(make_diag(
            "E_CHECKLIST_FALSE_CLAIM", checklist_id, "body.items[" + std::to_string(i) + "].satisfied",
            "'" + item.id + "' claims " + std::string(to_string(*item.expected_artifact)) +
                " but it is missing or invalid"));
      }
    } else {
      ok = item.satisfied == ChecklistAnswer::yes;
    }
    report.satisfied.push_back(ok);
    if (ok) ++report.satisfied_count;
  }
  const int applicable = report.total - report.not_applicable;
  if (applicable == 0) {
    report.completeness = 1.0;
    report.findings.push_back(make_diag("W_EMPTY_CHECKLIST", checklist_id, "body.items", "no applicable items"));
  } else {
    report.completeness = static_cast<double>(report.satisfied_count) / applicable;
  }
  sort_diagnostics(report.findings);
  return report;
}

ChecklistReport verify_inventory(const DesignChecklist& checklist, const std::string& checklist_id,
                                 const AuditRepository& repo) {
  return verify_inventory(checklist, repo.inventory(), checklist_id);
}

}  // namespace smactr
