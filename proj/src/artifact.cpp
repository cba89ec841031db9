#include "smactr/artifact.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <set>
#include <sstream>

#include "smactr/checklist.hpp"

namespace smactr {

const std::vector<std::string_view> kFmeaColumns = {
    "id",     "failure_mode",          "effect",        "cause",    "severity", "likelihood",
    "detection", "status", "threatened_principles", "evidence_refs", "rationale"};

std::string_view to_string(BoardDecision d) {
  switch (d) {
    case BoardDecision::approve: return "approve";
    case BoardDecision::approve_with_conditions: return "approve_with_conditions";
    case BoardDecision::reject: return "reject";
  }
  return "?";
}

std::string_view to_string(ImpactCategory c) {
  switch (c) {
    case ImpactCategory::ways_of_life: return "ways_of_life";
    case ImpactCategory::culture: return "culture";
    case ImpactCategory::community: return "community";
    case ImpactCategory::political_systems: return "political_systems";
    case ImpactCategory::environment: return "environment";
    case ImpactCategory::health_wellbeing: return "health_wellbeing";
    case ImpactCategory::rights: return "rights";
    case ImpactCategory::experiences: return "experiences";
  }
  return "?";
}

std::string_view to_string(FmeaStatus s) {
  switch (s) {
    case FmeaStatus::open: return "open";
    case FmeaStatus::mitigated: return "mitigated";
    case FmeaStatus::accepted: return "accepted";
  }
  return "?";
}

std::string_view to_string(ChecklistAnswer a) {
  switch (a) {
    case ChecklistAnswer::yes: return "yes";
    case ChecklistAnswer::no: return "no";
    case ChecklistAnswer::not_applicable: return "n/a";
  }
  return "?";
}

std::string_view to_string(MitigationStatus s) {
  switch (s) {
    case MitigationStatus::planned: return "planned";
    case MitigationStatus::verified: return "verified";
    case MitigationStatus::infeasible: return "infeasible";
    case MitigationStatus::under_inquiry: return "under_inquiry";
  }
  return "?";
}

ArtifactBody empty_body(ArtifactKind kind) {
  switch (kind) {
    case ArtifactKind::PrinciplesDeclaration: return PrinciplesDeclaration{};
    case ArtifactKind::ProductRequirementsDoc: return ProductRequirementsDoc{};
    case ArtifactKind::EthicalReview: return EthicalReview{};
    case ArtifactKind::SocialImpactAssessment: return SocialImpactAssessment{};
    case ArtifactKind::StakeholderMap: return StakeholderMap{};
    case ArtifactKind::FieldStudyReport: return FieldStudyReport{};
    case ArtifactKind::SystemMap: return SystemMap{};
    case ArtifactKind::DesignHistoryReview: return DesignHistoryReview{};
    case ArtifactKind::Fmea: return FmeaRegister{};
    case ArtifactKind::DesignChecklist: return DesignChecklist{};
    case ArtifactKind::ModelCard: return ModelCard{};
    case ArtifactKind::Datasheet: return Datasheet{};
    case ArtifactKind::AdversarialTestingReport: return AdversarialTestingReport{};
    case ArtifactKind::EthicalRiskChart: return EthicalRiskChart{};
    case ArtifactKind::RemediationPlan: return RemediationPlan{};
    case ArtifactKind::AuditSummaryReport: return AuditSummaryReport{};
  }
  return PrinciplesDeclaration{};
}

// --- serialization ----------------------------------------------------------

namespace {

json opt(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

json to_json(const PrinciplesDeclaration& b) {
  json principles = json::array();
  for (const auto& p : b.principles) {
    principles.push_back(
        {{"id", p.id}, {"name", p.name}, {"description", p.description}, {"note", p.note}});
  }
  return {{"statement", b.statement}, {"principles", principles}};
}

json to_json(const ProductRequirementsDoc& b) {
  json reqs = json::array();
  for (const auto& r : b.requirements) {
    reqs.push_back({{"id", r.id}, {"text", r.text}, {"principles", r.principles}});
  }
  return {{"product", b.product}, {"requirements", reqs}};
}

json to_json(const EthicalReview& b) {
  json groups = json::array();
  for (const auto& g : b.impacted_groups) groups.push_back({{"group", g.group}, {"impact", g.impact}});
  json reviewers = json::array();
  for (const auto& r : b.reviewers) {
    reviewers.push_back({{"name", r.name}, {"affiliation", r.affiliation}, {"standpoint", r.standpoint}});
  }
  return {{"use_case", b.use_case},
          {"impacted_groups", groups},
          {"reviewers", reviewers},
          {"board_decision", to_string(b.board_decision)},
          {"conditions", b.conditions}};
}

json to_json(const SocialImpactAssessment& b) {
  json entries = json::array();
  for (const auto& e : b.impact_entries) {
    entries.push_back({{"category", to_string(e.category)},
                       {"description", e.description},
                       {"severity", e.severity}});
  }
  return {{"impact_entries", entries}, {"overall_severity", b.overall_severity}};
}

json to_json(const StakeholderMap& b) {
  json people = json::array();
  for (const auto& s : b.stakeholders) {
    people.push_back({{"name", s.name},
                      {"role", s.role},
                      {"contact", s.contact},
                      {"contribution", s.contribution}});
  }
  return {{"stakeholders", people}};
}

json to_json(const FieldStudyReport& b) {
  json interviews = json::array();
  for (const auto& i : b.interviews) {
    interviews.push_back(
        {{"role", i.role}, {"transcript_ref", i.transcript_ref}, {"findings", i.findings}});
  }
  return {{"interviews", interviews}};
}

json to_json(const SystemMap& b) {
  json components = json::array();
  for (const auto& c : b.components) {
    components.push_back({{"id", c.id}, {"name", c.name}, {"description", c.description}});
  }
  json flows = json::array();
  for (const auto& f : b.flows) {
    flows.push_back({{"from", f.from}, {"to", f.to}, {"description", f.description}});
  }
  return {{"components", components}, {"flows", flows}};
}

json to_json(const DesignHistoryReview& b) {
  json docs = json::array();
  for (const auto& d : b.documents) {
    docs.push_back({{"title", d.title}, {"ref", d.ref}, {"summary", d.summary}});
  }
  json decisions = json::array();
  for (const auto& d : b.decisions) {
    decisions.push_back({{"id", d.id}, {"date", d.date}, {"summary", d.summary}});
  }
  return {{"documents", docs}, {"decisions", decisions}};
}

json to_json(const FmeaRegister& b) {
  json records = json::array();
  for (const auto& e : b.entries) {
    records.push_back(json::array({e.id, e.failure_mode, e.effect, e.cause, opt(e.severity),
                                   opt(e.likelihood), opt(e.detection), to_string(e.status),
                                   e.threatened_principles, e.evidence_refs, e.rationale}));
  }
  json columns = json::array();
  for (auto c : kFmeaColumns) columns.push_back(c);
  return {{"columns", columns}, {"records", records}};
}

json to_json(const DesignChecklist& b) {
  json items = json::array();
  for (const auto& i : b.items) {
    items.push_back({{"id", i.id},
                     {"prompt", i.prompt},
                     {"expected_artifact", i.expected_artifact ? json(to_string(*i.expected_artifact))
                                                               : json(nullptr)},
                     {"response", i.response},
                     {"satisfied", to_string(i.satisfied)},
                     {"justification", i.justification}});
  }
  return {{"items", items}};
}

json to_json(const ModelCard& b) {
  json perf = json::array();
  for (const auto& p : b.performance_by_group) {
    perf.push_back({{"group", p.group}, {"metric_name", p.metric_name}, {"value", p.value}});
  }
  return {{"model_name", b.model_name},
          {"intended_use", b.intended_use},
          {"out_of_scope_uses", b.out_of_scope_uses},
          {"evaluation_data", b.evaluation_data},
          {"performance_by_group", perf},
          {"limitations", b.limitations}};
}

json to_json(const Datasheet& b) {
  json axes = json::array();
  for (const auto& a : b.demographic_breakdown) {
    json groups = json::array();
    for (const auto& g : a.groups) groups.push_back({{"label", g.label}, {"fraction", g.fraction}});
    axes.push_back({{"axis", a.axis}, {"groups", groups}});
  }
  return {{"dataset_name", b.dataset_name},
          {"collection_process", b.collection_process},
          {"ethical_review_conducted", to_string(b.ethical_review_conducted)},
          {"relates_to_people", to_string(b.relates_to_people)},
          {"demographic_breakdown", axes}};
}

json to_json(const AdversarialTestingReport& b) {
  json cases = json::array();
  for (const auto& t : b.test_cases) {
    json tc = {{"id", t.id},
               {"target_fmea", t.target_fmea},
               {"description", t.description},
               {"slice", t.slice},
               {"trials", t.trials},
               {"failures", t.failures},
               {"new_entry", nullptr}};
    if (t.new_entry) {
      const auto& n = *t.new_entry;
      tc["new_entry"] = {{"id", n.id},
                         {"failure_mode", n.failure_mode},
                         {"effect", n.effect},
                         {"cause", n.cause},
                         {"severity", n.severity},
                         {"threatened_principles", n.threatened_principles}};
    }
    cases.push_back(std::move(tc));
  }
  return {{"test_cases", cases}};
}

json to_json(const EthicalRiskChart& b) {
  json rows = json::array();
  for (const auto& r : b.rows) {
    rows.push_back({{"fmea_id", r.fmea_id},
                    {"severity", r.severity},
                    {"likelihood", r.likelihood},
                    {"risk_class", to_string(r.risk_class)},
                    {"rationale", r.rationale}});
  }
  return {{"rows", rows}};
}

json to_json(const RemediationPlan& b) {
  json items = json::array();
  for (const auto& i : b.items) {
    items.push_back({{"id", i.id},
                     {"fmea_id", i.fmea_id},
                     {"action", i.action},
                     {"owner", i.owner},
                     {"status", to_string(i.status)}});
  }
  return {{"items", items}};
}

json to_json(const AuditSummaryReport& b) {
  json findings = json::array();
  for (const auto& f : b.principle_findings) {
    findings.push_back({{"principle", f.principle},
                        {"worst_class", to_string(f.worst_class)},
                        {"unexamined", f.unexamined},
                        {"fmea_ids", f.fmea_ids}});
  }
  return {{"verdict", to_string(b.verdict)},
          {"principle_findings", findings},
          {"gap_errors", b.gap_errors},
          {"gap_warnings", b.gap_warnings},
          {"gap_codes", b.gap_codes},
          {"checklist_completeness", b.checklist_completeness},
          {"conditions", b.conditions},
          {"adhf_hash", b.adhf_hash}};
}

}  // namespace

json body_to_json(const ArtifactDocument& doc) {
  json body = std::visit([](const auto& b) { return to_json(b); }, doc.body);
  body["evidences"] = doc.evidences;
  return body;
}

json meta_to_json(const ArtifactMeta& meta) {
  return {{"id", meta.id},
          {"kind", to_string(meta.kind)},
          {"producer", to_string(meta.producer)},
          {"stage", to_string(meta.stage)},
          {"version", meta.version},
          {"created_at", meta.created_at},
          {"content_hash", meta.content_hash},
          {"status", to_string(meta.status)},
          {"supersedes", meta.supersedes ? json(*meta.supersedes) : json(nullptr)}};
}

std::string canonical_body(const ArtifactDocument& doc) { return canonical_bytes(body_to_json(doc)); }

std::string compute_content_hash(const ArtifactDocument& doc) {
  return hash_artifact(canonical_body(doc));
}

ArtifactDocument& seal(ArtifactDocument& doc) {
  doc.meta.kind = doc.kind();
  doc.meta.content_hash = compute_content_hash(doc);
  return doc;
}

std::string serialize_artifact(const ArtifactDocument& doc) {
  ArtifactMeta meta = doc.meta;
  meta.kind = doc.kind();
  meta.content_hash = compute_content_hash(doc);
  json file = {{"meta", meta_to_json(meta)}, {"body", body_to_json(doc)}};
  return file.dump(2, ' ', false, json::error_handler_t::strict) + "\n";
}

// --- validation -------------------------------------------------------------

bool is_iso8601_timestamp(std::string_view text) {
  static const std::regex kPattern(
      R"(^\d{4}-\d{2}-\d{2}(T\d{2}:\d{2}(:\d{2}(\.\d+)?)?(Z|[+-]\d{2}:?\d{2})?)?$)");
  return std::regex_match(text.begin(), text.end(), kPattern);
}

namespace {

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r\n") == std::string_view::npos; }

bool valid_id(std::string_view id) {
  if (id.empty() || id.front() == '.') return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
           c == '_' || c == '.';
  });
}

class Checker {
 public:
  Checker(const ArtifactDocument& doc, const ValidationContext& ctx) : doc_(doc), ctx_(ctx) {
    for (const auto& p : ctx.principles) principle_ids_.insert(p.id);
  }

  void add(std::string_view code, std::string path, std::string message) {
    out_.push_back(make_diag(code, doc_.meta.id, std::move(path), std::move(message)));
  }

  void require_text(std::string_view value, const std::string& path) {
    if (blank(value)) add("E_EMPTY_TEXT", path, "must not be empty");
  }

  void scale(int value, const std::string& path) {
    if (!in_scale(value)) add("E_RANGE", path, "value " + std::to_string(value) + " outside 1..5");
  }

  void principle_refs(const std::vector<std::string>& ids, const std::string& path) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (!principle_ids_.count(ids[i])) {
        add("E_UNKNOWN_PRINCIPLE", path + "[" + std::to_string(i) + "]",
            "principle '" + ids[i] + "' is not declared");
      }
    }
  }

  template <class T, class IdFn>
  void unique_ids(const std::vector<T>& items, const std::string& path, IdFn id_of) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < items.size(); ++i) {
      const std::string& id = id_of(items[i]);
      if (blank(id)) {
        add("E_EMPTY_TEXT", path + "[" + std::to_string(i) + "].id", "id must not be empty");
      } else if (!seen.insert(id).second) {
        add("E_DUPLICATE_ID", path + "[" + std::to_string(i) + "].id", "duplicate id '" + id + "'");
      }
    }
  }

  void meta() {
    const auto& m = doc_.meta;
    if (!valid_id(m.id)) add("E_META", "meta.id", "id must be non-empty [A-Za-z0-9._-]");
    if (m.version < 1) add("E_META", "meta.version", "version must be >= 1");
    if (!is_iso8601_timestamp(m.created_at)) {
      add("E_META", "meta.created_at", "not an ISO-8601 timestamp: '" + m.created_at + "'");
    }
    if (m.supersedes && *m.supersedes == m.id) {
      add("E_SUPERSEDES_CYCLE", "meta.supersedes", "artifact supersedes itself");
    }
    auto it = ctx_.stage_of.find(doc_.kind());
    const Stage expected = it != ctx_.stage_of.end() ? it->second : default_stage(doc_.kind());
    if (m.stage != expected) {
      add("E_STAGE_MISMATCH", "meta.stage",
          std::string(to_string(doc_.kind())) + " belongs to " + std::string(to_string(expected)));
    }
  }

  void body(const PrinciplesDeclaration& b) {
    if (b.principles.empty()) add("E_PRINCIPLES_EMPTY", "body.principles", "no principles declared");
    unique_ids(b.principles, "body.principles", [](const Principle& p) -> const std::string& { return p.id; });
    for (std::size_t i = 0; i < b.principles.size(); ++i) {
      require_text(b.principles[i].name, "body.principles[" + std::to_string(i) + "].name");
    }
  }

  void body(const ProductRequirementsDoc& b) {
    unique_ids(b.requirements, "body.requirements",
               [](const Requirement& r) -> const std::string& { return r.id; });
    for (std::size_t i = 0; i < b.requirements.size(); ++i) {
      const auto path = "body.requirements[" + std::to_string(i) + "]";
      require_text(b.requirements[i].text, path + ".text");
      principle_refs(b.requirements[i].principles, path + ".principles");
    }
  }

  void body(const EthicalReview& b) {
    require_text(b.use_case, "body.use_case");
    if (b.impacted_groups.empty()) {
      add("E_ER_IMPACTED_GROUPS", "body.impacted_groups", "at least one impacted group is required");
    }
    if (b.board_decision == BoardDecision::approve) {
      std::set<std::string> standpoints;
      for (const auto& r : b.reviewers) {
        if (!blank(r.standpoint)) standpoints.insert(r.standpoint);
      }
      if (standpoints.size() < 2) {
        add("E_ER_STANDPOINTS", "body.reviewers",
            "approval with " + std::to_string(standpoints.size()) + " distinct standpoint(s)");
      }
    }
  }

  void body(const SocialImpactAssessment& b) {
    if (b.impact_entries.empty()) add("E_SIA_EMPTY", "body.impact_entries", "no impact entries");
    int worst = 0;
    for (std::size_t i = 0; i < b.impact_entries.size(); ++i) {
      scale(b.impact_entries[i].severity, "body.impact_entries[" + std::to_string(i) + "].severity");
      worst = std::max(worst, b.impact_entries[i].severity);
    }
    scale(b.overall_severity, "body.overall_severity");
    if (!b.impact_entries.empty() && b.overall_severity != worst) {
      add("E_SIA_OVERALL", "body.overall_severity",
          "overall " + std::to_string(b.overall_severity) + " but worst entry is " + std::to_string(worst));
    }
  }

  void body(const StakeholderMap& b) {
    if (b.stakeholders.empty()) add("E_SM_EMPTY", "body.stakeholders", "no stakeholders listed");
  }

  void body(const FieldStudyReport& b) {
    if (b.interviews.empty()) add("E_FS_EMPTY", "body.interviews", "no interviews recorded");
  }

  void body(const SystemMap& b) {
    if (b.components.empty()) add("E_SYS_EMPTY", "body.components", "no components");
    unique_ids(b.components, "body.components",
               [](const SystemComponent& c) -> const std::string& { return c.id; });
    std::set<std::string> ids;
    for (const auto& c : b.components) ids.insert(c.id);
    for (std::size_t i = 0; i < b.flows.size(); ++i) {
      const auto path = "body.flows[" + std::to_string(i) + "]";
      if (!ids.count(b.flows[i].from)) add("E_SYS_FLOW_REF", path + ".from", "unknown component '" + b.flows[i].from + "'");
      if (!ids.count(b.flows[i].to)) add("E_SYS_FLOW_REF", path + ".to", "unknown component '" + b.flows[i].to + "'");
    }
  }

  void body(const DesignHistoryReview& b) {
    unique_ids(b.decisions, "body.decisions",
               [](const DesignDecision& d) -> const std::string& { return d.id; });
  }

  void body(const FmeaRegister& b) {
    unique_ids(b.entries, "body.records", [](const FmeaEntry& e) -> const std::string& { return e.id; });
    for (std::size_t i = 0; i < b.entries.size(); ++i) {
      const auto& e = b.entries[i];
      const auto path = "body.records[" + std::to_string(i) + "]";
      require_text(e.failure_mode, path + ".failure_mode");
      if (e.threatened_principles.empty()) {
        add("E_FMEA_NO_PRINCIPLE", path + ".threatened_principles", "'" + e.id + "' threatens no principle");
      }
      principle_refs(e.threatened_principles, path + ".threatened_principles");
      if (e.severity) scale(*e.severity, path + ".severity");
      if (e.likelihood) scale(*e.likelihood, path + ".likelihood");
      if (e.detection) scale(*e.detection, path + ".detection");
    }
  }

  void body(const DesignChecklist& b) {
    unique_ids(b.items, "body.items", [](const ChecklistItem& c) -> const std::string& { return c.id; });
    for (std::size_t i = 0; i < b.items.size(); ++i) {
      const auto path = "body.items[" + std::to_string(i) + "]";
      if (blank(b.items[i].prompt)) add("E_CL_PROMPT", path + ".prompt", "prompt is empty");
      if (b.items[i].satisfied == ChecklistAnswer::not_applicable && blank(b.items[i].justification)) {
        add("E_CL_JUSTIFICATION", path + ".justification", "n/a requires a justification");
      }
    }
    Diagnostics lint = lint_questions(b, ctx_.closed_question_verbs);
    for (auto& d : lint) d.artifact_id = doc_.meta.id;
    append(out_, lint);
  }

  void body(const ModelCard& b) {
    require_text(b.model_name, "body.model_name");
    if (blank(b.intended_use)) add("E_MC_INTENDED_USE", "body.intended_use", "intended use must be documented");
    for (std::size_t i = 0; i < b.performance_by_group.size(); ++i) {
      if (!std::isfinite(b.performance_by_group[i].value)) {
        add("E_MC_PERF_NONFINITE", "body.performance_by_group[" + std::to_string(i) + "].value",
            "value is not finite");
      }
    }
  }

  void body(const Datasheet& b) {
    require_text(b.dataset_name, "body.dataset_name");
    if (blank(b.collection_process)) {
      add("E_DS_COLLECTION", "body.collection_process", "collection process must be described");
    }
    for (std::size_t a = 0; a < b.demographic_breakdown.size(); ++a) {
      const auto& axis = b.demographic_breakdown[a];
      const auto path = "body.demographic_breakdown[" + std::to_string(a) + "]";
      double sum = 0.0;
      double lo = 0.0;
      double hi = 0.0;
      bool in_range = true;
      for (std::size_t g = 0; g < axis.groups.size(); ++g) {
        const double f = axis.groups[g].fraction;
        if (!(f >= 0.0 && f <= 1.0)) {
          add("E_DS_FRACTION_RANGE", path + ".groups[" + std::to_string(g) + "].fraction",
              "fraction " + std::to_string(f) + " outside [0,1]");
          in_range = false;
          continue;
        }
        sum += f;
        lo = g == 0 ? f : std::min(lo, f);
        hi = g == 0 ? f : std::max(hi, f);
      }
      if (!in_range) continue;
      if (std::fabs(sum - 1.0) > ctx_.fraction_tolerance + 1e-9) {
        std::ostringstream msg;
        msg << "axis '" << axis.axis << "' sums to " << sum;
        add("E_DS_FRACTION_SUM", path + ".groups", msg.str());
      }
      // A single represented group, or an empty group, is maximally skewed.
      const bool skewed = axis.groups.size() < 2 || lo <= 0.0 || hi / lo > ctx_.skew_threshold;
      if (skewed) {
        std::ostringstream msg;
        msg << "axis '" << axis.axis << "' max/min ratio ";
        if (axis.groups.size() < 2 || lo <= 0.0) {
          msg << "unbounded";
        } else {
          msg << hi / lo;
        }
        msg << " exceeds " << ctx_.skew_threshold;
        add("W_DS_SKEW", path + ".groups", msg.str());
      }
    }
  }

  void body(const AdversarialTestingReport& b) {
    unique_ids(b.test_cases, "body.test_cases", [](const TestCase& t) -> const std::string& { return t.id; });
    for (std::size_t i = 0; i < b.test_cases.size(); ++i) {
      const auto& t = b.test_cases[i];
      const auto path = "body.test_cases[" + std::to_string(i) + "]";
      if (t.trials < 1 || t.failures < 0 || t.failures > t.trials) {
        add("E_ATR_TRIALS", path, std::to_string(t.failures) + " failures in " + std::to_string(t.trials) + " trials");
      }
      require_text(t.target_fmea, path + ".target_fmea");
      const bool is_new = t.target_fmea == kNewFmeaTarget;
      if (is_new && !t.new_entry) {
        add("E_ATR_NEW_ENTRY", path + ".new_entry", "target 'new' needs a new_entry");
      } else if (!is_new && t.new_entry) {
        add("E_ATR_NEW_ENTRY", path + ".new_entry", "new_entry only allowed when target is 'new'");
      }
      if (t.new_entry) {
        const auto& n = *t.new_entry;
        if (blank(n.id) || n.id == kNewFmeaTarget) add("E_ATR_NEW_ENTRY", path + ".new_entry.id", "invalid id");
        require_text(n.failure_mode, path + ".new_entry.failure_mode");
        scale(n.severity, path + ".new_entry.severity");
        if (n.threatened_principles.empty()) {
          add("E_FMEA_NO_PRINCIPLE", path + ".new_entry.threatened_principles", "threatens no principle");
        }
        principle_refs(n.threatened_principles, path + ".new_entry.threatened_principles");
      }
    }
  }

  void body(const EthicalRiskChart& b) {
    unique_ids(b.rows, "body.rows", [](const ChartRow& r) -> const std::string& { return r.fmea_id; });
    for (std::size_t i = 0; i < b.rows.size(); ++i) {
      const auto& r = b.rows[i];
      const auto path = "body.rows[" + std::to_string(i) + "]";
      const bool ok = in_scale(r.severity) && in_scale(r.likelihood);
      scale(r.severity, path + ".severity");
      scale(r.likelihood, path + ".likelihood");
      if (ok) {
        const RiskClass expected = ctx_.risk_matrix.at(r.severity, r.likelihood);
        if (expected != r.risk_class) {
          add("E_ERC_CLASS", path + ".risk_class",
              std::string(to_string(r.risk_class)) + " recorded, matrix gives " +
                  std::string(to_string(expected)));
        }
      }
    }
  }

  void body(const RemediationPlan& b) {
    unique_ids(b.items, "body.items", [](const RemediationItem& r) -> const std::string& { return r.id; });
    for (std::size_t i = 0; i < b.items.size(); ++i) {
      const auto path = "body.items[" + std::to_string(i) + "]";
      if (blank(b.items[i].action)) add("E_RP_EMPTY", path + ".action", "no action described");
      require_text(b.items[i].fmea_id, path + ".fmea_id");
    }
  }

  void body(const AuditSummaryReport& b) {
    if (!(b.checklist_completeness >= 0.0 && b.checklist_completeness <= 1.0)) {
      add("E_BAD_VALUE", "body.checklist_completeness", "completeness outside [0,1]");
    }
    for (std::size_t i = 0; i < b.principle_findings.size(); ++i) {
      const auto& id = b.principle_findings[i].principle;
      if (!principle_ids_.count(id)) {
        add("E_UNKNOWN_PRINCIPLE", "body.principle_findings[" + std::to_string(i) + "].principle",
            "principle '" + id + "' is not declared");
      }
    }
  }

  Diagnostics run() {
    meta();
    std::visit([this](const auto& b) { body(b); }, doc_.body);
    sort_diagnostics(out_);
    return std::move(out_);
  }

 private:
  const ArtifactDocument& doc_;
  const ValidationContext& ctx_;
  std::set<std::string> principle_ids_;
  Diagnostics out_;
};

}  // namespace

Diagnostics validate_artifact(const ArtifactDocument& artifact, const ValidationContext& context) {
  return Checker(artifact, context).run();
}

Diagnostics validate_artifact(const ArtifactDocument& artifact, const std::vector<Principle>& principles) {
  ValidationContext ctx;
  ctx.principles = principles;
  return validate_artifact(artifact, ctx);
}

}  // namespace smactr
