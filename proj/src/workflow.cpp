#include "smactr/workflow.hpp"

#include <algorithm>
#include <sstream>

#include "object_reader.hpp"
#include "smactr/checklist.hpp"
#include "smactr/repository.hpp"
#include "smactr/risk.hpp"

namespace smactr {

using detail::Need;
using detail::ObjectReader;
using detail::Sink;

// --- requirements -------------------------------------------------------

namespace {

using K = ArtifactKind;

struct DefaultRequirement {
  Stage stage;
  K kind;
  ArtifactStatus min_status;
};

const std::vector<DefaultRequirement>& default_requirements() {
  static const std::vector<DefaultRequirement> table = {
      {Stage::Scoping, K::PrinciplesDeclaration, ArtifactStatus::final},
      {Stage::Scoping, K::ProductRequirementsDoc, ArtifactStatus::final},
      {Stage::Scoping, K::EthicalReview, ArtifactStatus::final},
      {Stage::Scoping, K::SocialImpactAssessment, ArtifactStatus::final},
      {Stage::Mapping, K::StakeholderMap, ArtifactStatus::final},
      {Stage::Mapping, K::SystemMap, ArtifactStatus::final},
      {Stage::Mapping, K::DesignHistoryReview, ArtifactStatus::final},
      {Stage::Mapping, K::FieldStudyReport, ArtifactStatus::final},
      {Stage::Mapping, K::Fmea, ArtifactStatus::draft},
      {Stage::ArtifactCollection, K::DesignChecklist, ArtifactStatus::final},
      {Stage::ArtifactCollection, K::ModelCard, ArtifactStatus::final},
      {Stage::ArtifactCollection, K::Datasheet, ArtifactStatus::final},
      {Stage::Testing, K::AdversarialTestingReport, ArtifactStatus::final},
      {Stage::Testing, K::EthicalRiskChart, ArtifactStatus::final},
      {Stage::Reflection, K::Fmea, ArtifactStatus::final},
      {Stage::Reflection, K::RemediationPlan, ArtifactStatus::final},
      {Stage::Reflection, K::AuditSummaryReport, ArtifactStatus::final},
  };
  return table;
}

bool dropped_by_profile(Profile profile, K kind) {
  return profile == Profile::light && (kind == K::FieldStudyReport || kind == K::SystemMap);
}

std::string kind_at(K kind, Stage stage) {
  return std::string(to_string(kind)) + " at " + std::string(to_string(stage));
}

}  // namespace

Result<RequirementTable> requirement_table(const Manifest& manifest) {
  RequirementTable table;
  for (Stage s : kAllStages) table[s];
  for (const auto& d : default_requirements()) {
    if (dropped_by_profile(manifest.profile, d.kind)) continue;
    table[d.stage].push_back({d.kind, manifest.producer_for(d.kind), d.min_status});
  }

  Diagnostics diags;
  for (const auto& rm : manifest.remove_requirements) {
    auto& list = table[rm.stage];
    auto it = std::find_if(list.begin(), list.end(), [&](const RequiredArtifact& r) { return r.kind == rm.kind; });
    if (it == list.end()) {
      diags.push_back(make_diag("E_CONFIG", "manifest", "requirement_overrides.remove",
                                "cannot remove " + kind_at(rm.kind, rm.stage) + ": not required there"));
      continue;
    }
    list.erase(it);
  }
  for (const auto& add : manifest.add_requirements) {
    auto& list = table[add.stage];
    auto it = std::find_if(list.begin(), list.end(), [&](const RequiredArtifact& r) { return r.kind == add.kind; });
    if (it != list.end()) {
      it->min_status = add.min_status;
    } else {
      list.push_back({add.kind, manifest.producer_for(add.kind), add.min_status});
    }
  }

  std::map<K, std::vector<Stage>> stages_of;
  for (const auto& [stage, list] : table) {
    for (const auto& r : list) stages_of[r.kind].push_back(stage);
  }
  for (const auto& [kind, stages] : stages_of) {
    if (stages.size() < 2 || kind == K::Fmea) continue;
    std::string where;
    for (Stage s : stages) where += (where.empty() ? "" : ", ") + std::string(to_string(s));
    diags.push_back(make_diag("E_CONFIG", "manifest", "requirement_overrides",
                              std::string(to_string(kind)) + " is required in more than one stage: " + where));
  }
  if (!diags.empty()) {
    sort_diagnostics(diags);
    return diags;
  }
  return table;
}

Result<std::vector<RequiredArtifact>> required_artifacts(Stage stage, const Manifest& manifest) {
  auto table = requirement_table(manifest);
  if (!table) return table.diagnostics();
  return table.value().at(stage);
}

std::map<ArtifactKind, Stage> stage_assignment(const RequirementTable& table) {
  std::map<ArtifactKind, Stage> out;
  for (const auto& [stage, list] : table) {
    for (const auto& r : list) {
      auto it = out.find(r.kind);
      if (it == out.end() || stage < it->second) out[r.kind] = stage;
    }
  }
  for (ArtifactKind k : kAllKinds) out.emplace(k, default_stage(k));
  return out;
}

// --- state --------------------------------------------------------------

std::string serialize_workflow_state(const WorkflowState& state) {
  json log = json::array();
  for (const auto& e : state.gate_log) {
    log.push_back({{"stage", to_string(e.stage)},
                   {"timestamp", e.timestamp},
                   {"result", e.result},
                   {"diagnostics_hash", e.diagnostics_hash},
                   {"inputs_hash", e.inputs_hash},
                   {"waivers", e.waivers},
                   {"history_length", e.history_length}});
  }
  json root = {{"current_stage", to_string(state.current_stage)}, {"gate_log", log}};
  return root.dump(2) + "\n";
}

Result<WorkflowState> parse_workflow_state(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    return make_diag("E_PARSE", kStateFile, "", e.what());
  }
  Sink sink;
  sink.artifact_id = kStateFile;
  WorkflowState state;
  {
    ObjectReader r(root, "", sink);
    state.current_stage = r.enumeration("current_stage", &parse_stage, Stage::Scoping);
    state.gate_log = r.list<GateLogEntry>("gate_log", Need::optional, [&](const json& j, const std::string& p) {
      ObjectReader er(j, p, sink);
      GateLogEntry e;
      e.stage = er.enumeration("stage", &parse_stage, Stage::Scoping);
      e.timestamp = er.text("timestamp");
      e.result = er.text("result");
      e.diagnostics_hash = er.text("diagnostics_hash");
      e.inputs_hash = er.text("inputs_hash", Need::optional);
      e.waivers = er.text_list("waivers");
      const int len = er.opt_int("history_length").value_or(0);
      if (len < 0) sink.add("E_BAD_VALUE", er.child("history_length"), "must not be negative");
      e.history_length = static_cast<std::size_t>(std::max(len, 0));
      if (e.result != "pass" && e.result != "fail") sink.add("E_BAD_VALUE", er.child("result"), "expected pass or fail");
      return e;
    });
  }
  std::optional<Stage> last;
  std::size_t last_len = 0;
  Stage reached = Stage::Scoping;
  for (std::size_t i = 0; i < state.gate_log.size(); ++i) {
    const auto& e = state.gate_log[i];
    const std::string p = detail::index_path("gate_log", i);
    if (last && e.stage < *last) sink.add("E_BAD_VALUE", p + ".stage", "gate log stages must not decrease");
    if (e.history_length < last_len) sink.add("E_BAD_VALUE", p + ".history_length", "must not decrease");
    if (e.result == "pass") {
      if (e.stage <= reached && last) sink.add("E_BAD_VALUE", p + ".stage", "stage passed more than once");
      if (e.stage == Stage::Scoping) sink.add("E_BAD_VALUE", p + ".stage", "Scoping has no entry gate");
      reached = std::max(reached, e.stage);
    }
    last = e.stage;
    last_len = e.history_length;
  }
  if (!sink.failed() && state.current_stage != reached) {
    sink.add("E_BAD_VALUE", "current_stage", "does not match the last passed gate (" + std::string(to_string(reached)) + ")");
  }
  if (sink.failed()) {
    auto diags = sink.take();
    sort_diagnostics(diags);
    return diags;
  }
  return state;
}

// --- gates --------------------------------------------------------------

namespace {

bool meets(const LoadedArtifact& a, const RequiredArtifact& req) {
  return a.valid() && a.doc.meta.status >= req.min_status && a.doc.meta.producer == req.producer;
}

void check_requirement(const AuditRepository& repo, Stage stage, const RequiredArtifact& req, Diagnostics& out) {
  const auto candidates = repo.of_kind(req.kind);
  const std::string what = kind_at(req.kind, stage);
  if (candidates.empty()) {
    out.push_back(make_diag("E_GATE_MISSING", std::string(to_string(req.kind)), "", what + " is missing"));
    return;
  }
  if (std::any_of(candidates.begin(), candidates.end(), [&](const LoadedArtifact* a) { return meets(*a, req); })) {
    return;
  }
  const LoadedArtifact& a = *repo.primary(req.kind);
  const std::string& id = a.doc.meta.id;
  if (!a.valid()) out.push_back(make_diag("E_GATE_INVALID", id, "", what + " fails validation"));
  if (a.doc.meta.status < req.min_status) {
    out.push_back(make_diag("E_GATE_STATUS", id, "meta.status",
                            what + " is " + std::string(to_string(a.doc.meta.status)) + ", needs " +
                                std::string(to_string(req.min_status))));
  }
  if (a.doc.meta.producer != req.producer) {
    out.push_back(make_diag("E_GATE_PRODUCER", id, "meta.producer",
                            what + " must be produced by " + std::string(to_string(req.producer)) + ", not " +
                                std::string(to_string(a.doc.meta.producer))));
  }
}

bool required_before(const AuditRepository& repo, ArtifactKind kind, int end_index) {
  for (const auto& [stage, list] : repo.requirements) {
    if (stage_index(stage) >= end_index) continue;
    for (const auto& r : list) {
      if (r.kind == kind) return true;
    }
  }
  return false;
}

void check_checklist(const AuditRepository& repo, const GateOptions& options, Diagnostics& out) {
  const LoadedArtifact* a = repo.primary(ArtifactKind::DesignChecklist);
  if (!a) return;
  const auto& checklist = *a->doc.as<DesignChecklist>();
  ChecklistReport report = verify_inventory(checklist, a->doc.meta.id, repo);
  for (const auto& d : report.findings) {
    if (d.code == "E_CHECKLIST_FALSE_CLAIM") out.push_back(d);
  }
  if (report.completeness < 1.0) {
    std::ostringstream msg;
    msg << "checklist completeness " << report.satisfied_count << "/" << (report.total - report.not_applicable);
    if (options.waive_checklist) {
      out.push_back(make_diag("I_WAIVED", a->doc.meta.id, "", msg.str() + " accepted by waiver"));
    } else {
      out.push_back(make_diag("E_GATE_CHECKLIST", a->doc.meta.id, "", msg.str() + ", must be complete"));
    }
  }
}

void check_scored(const AuditRepository& repo, Diagnostics& out) {
  const LoadedArtifact* a = repo.primary(ArtifactKind::Fmea);
  if (!a) return;
  const auto& reg = *a->doc.as<FmeaRegister>();
  for (std::size_t i = 0; i < reg.entries.size(); ++i) {
    const auto& e = reg.entries[i];
    if (!e.severity || !e.likelihood) {
      out.push_back(make_diag("E_FMEA_UNSCORED", a->doc.meta.id, detail::index_path("body.records", i),
                              "failure mode '" + e.id + "' needs severity and likelihood before Testing"));
    }
  }
}

void check_reflection_inputs(const AuditRepository& repo, Diagnostics& out) {
  const LoadedArtifact* fmea = repo.primary(ArtifactKind::Fmea);
  if (!fmea) return;
  const auto& reg = *fmea->doc.as<FmeaRegister>();
  const RiskMatrix matrix = repo.manifest.matrix();
  if (const LoadedArtifact* chart = repo.primary(ArtifactKind::EthicalRiskChart)) {
    append(out, check_chart_consistency(*chart->doc.as<EthicalRiskChart>(), chart->doc.meta.id, reg, matrix));
  }
  std::set<std::string> covered;
  for (const LoadedArtifact* atr : repo.of_kind(ArtifactKind::AdversarialTestingReport)) {
    for (const auto& tc : atr->doc.as<AdversarialTestingReport>()->test_cases) {
      covered.insert(tc.target_fmea);
      if (tc.new_entry) covered.insert(tc.new_entry->id);
    }
  }
  for (std::size_t i = 0; i < reg.entries.size(); ++i) {
    const auto& e = reg.entries[i];
    if (e.status != FmeaStatus::open || entry_class(e, matrix) != RiskClass::high) continue;
    if (covered.count(e.id) || !e.rationale.empty()) continue;
    out.push_back(make_diag("E_UNTESTED_RISK", fmea->doc.meta.id, detail::index_path("body.records", i),
                            "open high risk '" + e.id + "' has no covering test case and no rationale"));
  }
}

// Requirements of every stage with index < end_index, plus the conditions
// that become binding once those stages are complete.
GateResult run_gate(const AuditRepository& repo, int end_index, const GateOptions& options,
                    const std::set<ArtifactKind>& exclude) {
  GateResult result;
  Diagnostics& out = result.diagnostics;
  for (const auto& [stage, list] : repo.requirements) {
    if (stage_index(stage) >= end_index) continue;
    for (const auto& req : list) {
      if (!exclude.count(req.kind)) check_requirement(repo, stage, req, out);
    }
  }
  if (end_index > stage_index(Stage::ArtifactCollection)) {
    if (required_before(repo, ArtifactKind::DesignChecklist, end_index)) check_checklist(repo, options, out);
    check_scored(repo, out);
  }
  if (end_index > stage_index(Stage::Testing)) check_reflection_inputs(repo, out);
  sort_diagnostics(out);
  result.pass = !has_errors(out);
  return result;
}

std::string diagnostics_hash(const Diagnostics& diags) {
  return sha256_hex(format_machine(diags));
}

}  // namespace

GateResult check_gate(const AuditRepository& repo, Stage target, const GateOptions& options) {
  return run_gate(repo, stage_index(target), options, {});
}

GateResult check_completion(const AuditRepository& repo, const GateOptions& options,
                            const std::set<ArtifactKind>& exclude) {
  return run_gate(repo, stage_index(Stage::Reflection) + 1, options, exclude);
}

std::string inputs_hash(std::vector<ArtifactVersion> versions) {
  std::sort(versions.begin(), versions.end(),
            [](const ArtifactVersion& a, const ArtifactVersion& b) { return a.id < b.id; });
  std::string text;
  for (const auto& v : versions) text += v.id + "\t" + std::to_string(v.version) + "\t" + v.hash + "\n";
  return sha256_hex(text);
}

std::string inputs_hash(const AuditRepository& repo) {
  std::vector<ArtifactVersion> versions;
  for (const auto& a : repo.artifacts) {
    versions.push_back({a.doc.meta.id, a.doc.meta.version, compute_content_hash(a.doc)});
  }
  return inputs_hash(std::move(versions));
}

Result<WorkflowState> advance_stage(const AuditRepository& repo, Stage target, const std::string& timestamp,
                                    const GateOptions& options) {
  const auto next = successor(repo.state.current_stage);
  if (!next || *next != target) {
    return make_diag("E_STAGE_SKIP", "", "",
                     "cannot move from " + std::string(to_string(repo.state.current_stage)) + " to " +
                         std::string(to_string(target)));
  }
  GateResult gate = check_gate(repo, target, options);
  if (!gate.pass) {
    Diagnostics diags = gate.diagnostics;
    diags.push_back(make_diag("E_GATE_FAILED", "", "", "gate into " + std::string(to_string(target)) + " failed"));
    sort_diagnostics(diags);
    return diags;
  }
  GateLogEntry entry;
  entry.stage = target;
  entry.timestamp = timestamp;
  entry.result = "pass";
  entry.diagnostics_hash = diagnostics_hash(gate.diagnostics);
  entry.inputs_hash = inputs_hash(repo);
  entry.history_length = repo.history.size();
  if (std::any_of(gate.diagnostics.begin(), gate.diagnostics.end(),
                  [](const Diagnostic& d) { return d.code == "I_WAIVED"; })) {
    entry.waivers.push_back("checklist");
  }
  WorkflowState state = repo.state;
  state.current_stage = target;
  state.gate_log.push_back(std::move(entry));
  return state;
}

}  // namespace smactr
