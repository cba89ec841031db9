#include "smactr/report.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

#include "smactr/checklist.hpp"
#include "smactr/repository.hpp"

namespace smactr {

// --- verdict ------------------------------------------------------------

Result<VerdictAssessment> assess_verdict(const RiskRegister& reg, const Diagnostics& gaps, const RemediationPlan* plan,
                                         const RiskMatrix& matrix, RiskClass trigger) {
  if (!plan) return make_diag("E_MISSING_REMEDIATION", "", "", "no remediation plan to judge open risks against");
  VerdictAssessment out;
  auto raise = [&](Verdict v, std::string reason) {
    out.verdict = std::max(out.verdict, v);
    out.reasons.push_back(std::move(reason));
  };
  for (const auto& e : reg.entries) {
    if (e.status != FmeaStatus::open) continue;
    const auto cls = entry_class(e, matrix);
    if (!cls || *cls < trigger) continue;
    bool infeasible = false, planned = false, verified = false;
    for (const auto& item : plan->items) {
      if (item.fmea_id != e.id) continue;
      infeasible |= item.status == MitigationStatus::infeasible;
      planned |= item.status == MitigationStatus::planned;
      verified |= item.status == MitigationStatus::verified;
    }
    const std::string label = e.id + " (" + std::string(to_string(*cls)) + ")";
    if (infeasible) {
      raise(Verdict::cancel, label + ": mitigation marked infeasible");
    } else if (!planned && !verified) {
      raise(Verdict::stall, label + ": no mitigation planned");
    } else if (!verified) {
      raise(Verdict::conditional_greenlight, label + ": mitigation planned, not yet verified");
    } else {
      raise(Verdict::conditional_greenlight, label + ": mitigation verified, risk still open");
    }
  }
  const int gap_errors = count_severity(gaps, Severity::error);
  if (gap_errors > 0) {
    raise(Verdict::conditional_greenlight, std::to_string(gap_errors) + " error-level coverage gap(s)");
  }
  return out;
}

Result<Verdict> determine_verdict(const RiskRegister& reg, const Diagnostics& gaps, const RemediationPlan* plan,
                                  const RiskMatrix& matrix, RiskClass trigger) {
  auto a = assess_verdict(reg, gaps, plan, matrix, trigger);
  if (!a) return a.diagnostics();
  return a->verdict;
}

// --- compilation --------------------------------------------------------

namespace {

std::vector<std::string> gate_waivers(const WorkflowState& state) {
  std::set<std::string> all;
  for (const auto& e : state.gate_log) all.insert(e.waivers.begin(), e.waivers.end());
  return {all.begin(), all.end()};
}

std::string condition_line(const RemediationItem& item) {
  return item.id + " (" + item.fmea_id + ", " + std::string(to_string(item.status)) + "): " + item.action +
         (item.owner.empty() ? "" : " [owner: " + item.owner + "]");
}

}  // namespace

Result<SummaryReport> compile_report(const AuditRepository& repo) {
  GateOptions options;
  const auto waivers = gate_waivers(repo.state);
  options.waive_checklist = std::count(waivers.begin(), waivers.end(), "checklist") > 0;
  GateResult gate = check_completion(repo, options, {ArtifactKind::AuditSummaryReport});
  if (!gate.pass) return gate.diagnostics;

  auto graph = build_graph(repo);
  if (!graph) return graph.diagnostics();

  SummaryReport r;
  r.audit_id = repo.manifest.audit_id;
  r.product = repo.manifest.product;
  r.profile = repo.manifest.profile;
  r.stage = repo.state.current_stage;
  r.principles = repo.principles();
  r.matrix = repo.manifest.matrix();
  r.waivers = waivers;
  r.repo_hash = graph->repo_hash;

  for (const auto* a : repo.of_kind(ArtifactKind::ProductRequirementsDoc)) {
    r.requirement_count += a->doc.as<ProductRequirementsDoc>()->requirements.size();
  }
  if (const auto* sm = repo.primary_body<StakeholderMap>(ArtifactKind::StakeholderMap)) r.stakeholders = sm->stakeholders;

  const RiskRegister reg = repo.risk_register().value_or(RiskRegister{});
  auto prioritized = prioritize_risks(reg, r.matrix);
  if (!prioritized) return prioritized.diagnostics();
  r.risks = prioritized.value();

  for (const auto* a : repo.of_kind(ArtifactKind::AdversarialTestingReport)) {
    for (const auto& tc : a->doc.as<AdversarialTestingReport>()->test_cases) r.tests.push_back({a->doc.meta.id, tc});
  }

  r.gaps = find_gaps(*graph, reg, r.matrix);
  const auto* plan = repo.primary_body<RemediationPlan>(ArtifactKind::RemediationPlan);
  auto verdict = assess_verdict(reg, r.gaps, plan, r.matrix, repo.manifest.verdict_trigger_class);
  if (!verdict) return verdict.diagnostics();
  r.verdict = verdict.value();

  AuditSummaryReport& s = r.summary;
  s.verdict = r.verdict.verdict;
  const auto threats = assess_principle_threats(reg, r.principles, r.matrix);
  for (const auto& p : r.principles) {
    const auto it = threats.find(p.id);
    PrincipleThreat t = it != threats.end() ? it->second : PrincipleThreat{};
    s.principle_findings.push_back({p.id, t.worst, t.unexamined, t.fmea_ids});
  }
  s.gap_errors = count_severity(r.gaps, Severity::error);
  s.gap_warnings = count_severity(r.gaps, Severity::warning);
  std::set<std::string> codes;
  for (const auto& d : r.gaps) codes.insert(d.code);
  s.gap_codes.assign(codes.begin(), codes.end());
  if (const auto* cl = repo.primary(ArtifactKind::DesignChecklist)) {
    s.checklist_completeness = verify_inventory(*cl->doc.as<DesignChecklist>(), cl->doc.meta.id, repo).completeness;
  }
  if (plan) {
    for (const auto& item : plan->items) {
      if (item.status != MitigationStatus::verified) s.conditions.push_back(condition_line(item));
    }
  }
  s.adhf_hash = graph_hash(*graph);

  for (const auto& a : repo.artifacts) {
    if (a.doc.kind() == ArtifactKind::AuditSummaryReport) continue;
    r.inputs.push_back({a.doc.meta.id, a.doc.meta.version, compute_content_hash(a.doc)});
  }
  return r;
}

// --- rendering ----------------------------------------------------------

namespace {

void section(std::ostream& os, std::string_view title) { os << "\n== " << title << " ==\n"; }

std::string principle_name(const SummaryReport& r, const std::string& id) {
  for (const auto& p : r.principles) {
    if (p.id == id) return p.name.empty() ? id : p.name;
  }
  return id;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : std::string(sep)) + s;
  return out;
}

std::string score(const std::optional<int>& v) { return v ? std::to_string(*v) : "-"; }

}  // namespace

std::string render_report(const SummaryReport& r) {
  std::ostringstream os;
  const AuditSummaryReport& s = r.summary;
  os << "AUDIT SUMMARY REPORT\n";
  os << "audit: " << r.audit_id << "\nproduct: " << r.product << "\nprofile: " << to_string(r.profile)
     << "\nstage: " << to_string(r.stage) << "\n";
  if (s.verdict == Verdict::stall) {
    os << "\n*** STALLED: open high risks have no planned mitigation. Launch is on hold. ***\n";
  } else if (s.verdict == Verdict::cancel) {
    os << "\n*** CANCEL RECOMMENDED: an open high risk cannot be mitigated. ***\n";
  }

  section(os, "Scope");
  os << "principles:\n";
  for (const auto& p : r.principles) os << "  " << p.id << "\t" << p.name << "\n";
  os << "requirements: " << r.requirement_count << "\n";
  os << "artifacts: " << r.inputs.size() << "\n";

  section(os, "Stakeholders");
  if (r.stakeholders.empty()) os << "(none recorded)\n";
  for (const auto& st : r.stakeholders) {
    os << "  " << st.name << "\t" << st.role << (st.contribution.empty() ? "" : "\t" + st.contribution) << "\n";
  }

  section(os, "Risks");
  if (r.risks.empty()) os << "(no failure modes recorded)\n";
  int rank = 0;
  for (const auto& e : r.risks) {
    const auto cls = entry_class(e, r.matrix);
    os << "  " << ++rank << ". " << e.id << "\t" << (cls ? to_string(*cls) : "-") << "\tS" << score(e.severity) << " L"
       << score(e.likelihood) << "\t" << to_string(e.status) << "\t" << join(e.threatened_principles, ",") << "\t"
       << e.failure_mode << "\n";
  }
  os << "findings by principle:\n";
  for (const auto& f : s.principle_findings) {
    os << "  " << principle_name(r, f.principle) << ": ";
    if (f.unexamined) {
      os << "unexamined\n";
    } else if (f.fmea_ids.empty()) {
      os << "no open scored risks\n";
    } else {
      os << to_string(f.worst_class) << " (" << join(f.fmea_ids, ", ") << ")\n";
    }
  }

  section(os, "Tests");
  if (r.tests.empty()) os << "(no adversarial tests recorded)\n";
  for (const auto& t : r.tests) {
    std::ostringstream rate;
    rate << std::fixed << std::setprecision(3)
         << (t.test.trials > 0 ? static_cast<double>(t.test.failures) / t.test.trials : 0.0);
    os << "  " << t.test.id << "\t" << t.report_id << "\ttarget=" << t.test.target_fmea << "\t" << t.test.failures
       << "/" << t.test.trials << " failed (" << rate.str() << ")\t" << t.test.description << "\n";
  }

  section(os, "Gaps");
  {
    std::ostringstream pct;
    pct << std::fixed << std::setprecision(3) << s.checklist_completeness;
    os << "checklist completeness: " << pct.str() << "\n";
  }
  if (!r.waivers.empty()) os << "gate waivers: " << join(r.waivers, ", ") << "\n";
  os << "errors: " << s.gap_errors << "  warnings: " << s.gap_warnings << "\n";
  for (const auto& d : r.gaps) os << "  " << format_text({d});

  section(os, "Verdict");
  os << to_string(s.verdict) << "\n";
  for (const auto& reason : r.verdict.reasons) os << "  - " << reason << "\n";

  section(os, "Conditions");
  if (s.conditions.empty()) os << "(none)\n";
  for (const auto& c : s.conditions) os << "  - " << c << "\n";

  section(os, "Integrity");
  os << "repo_hash: " << r.repo_hash << "\nadhf_hash: " << s.adhf_hash << "\n";
  for (const auto& v : r.inputs) os << "  " << v.id << "\tv" << v.version << "\t" << v.hash << "\n";
  return os.str();
}

ArtifactDocument report_artifact(const SummaryReport& report, const std::string& id, int version,
                                 const std::string& created_at) {
  ArtifactDocument doc;
  doc.meta.id = id;
  doc.meta.kind = ArtifactKind::AuditSummaryReport;
  doc.meta.producer = ProducerRole::auditor;
  doc.meta.stage = Stage::Reflection;
  doc.meta.version = version;
  doc.meta.created_at = created_at;
  doc.meta.status = ArtifactStatus::final;
  doc.body = report.summary;
  seal(doc);
  return doc;
}

}  // namespace smactr
