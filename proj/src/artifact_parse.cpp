// Schema-driven reading of artifact documents. Every object is read through
// an ObjectReader that records which keys were consumed; whatever is left over
// is reported as E_UNKNOWN_FIELD.

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <set>

#include "smactr/artifact.hpp"
#include "object_reader.hpp"

namespace smactr {

using detail::index_path;
using detail::Need;
using detail::ObjectReader;
using detail::Sink;

namespace {

std::optional<BoardDecision> parse_board_decision(std::string_view s) {
  if (s == "approve") return BoardDecision::approve;
  if (s == "approve_with_conditions") return BoardDecision::approve_with_conditions;
  if (s == "reject") return BoardDecision::reject;
  return std::nullopt;
}

std::optional<ImpactCategory> parse_impact_category(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(ImpactCategory::experiences); ++i) {
    auto c = static_cast<ImpactCategory>(i);
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

std::optional<FmeaStatus> parse_fmea_status(std::string_view s) {
  for (auto st : {FmeaStatus::open, FmeaStatus::mitigated, FmeaStatus::accepted}) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

std::optional<ChecklistAnswer> parse_answer(std::string_view s) {
  for (auto a : {ChecklistAnswer::yes, ChecklistAnswer::no, ChecklistAnswer::not_applicable}) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

std::optional<MitigationStatus> parse_mitigation_status(std::string_view s) {
  for (auto m : {MitigationStatus::planned, MitigationStatus::verified, MitigationStatus::infeasible,
                 MitigationStatus::under_inquiry}) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

// --- per-kind readers -------------------------------------------------------

Principle read_principle(const json& j, const std::string& path, Sink& sink) {
  ObjectReader r(j, path, sink);
  return {r.text("id"), r.text("name"), r.text("description", Need::optional),
          r.text("note", Need::optional)};
}

PrinciplesDeclaration read_principles(ObjectReader& r, Sink& sink) {
  PrinciplesDeclaration out;
  out.statement = r.text("statement", Need::optional);
  out.principles = r.list<Principle>("principles", Need::required, [&](const json& j, const std::string& p) {
    return read_principle(j, p, sink);
  });
  return out;
}

ProductRequirementsDoc read_prd(ObjectReader& r, Sink& sink) {
  ProductRequirementsDoc out;
  out.product = r.text("product");
  out.requirements =
      r.list<Requirement>("requirements", Need::required, [&](const json& j, const std::string& p) {
        ObjectReader ir(j, p, sink);
        Requirement req;
        req.id = ir.text("id");
        req.text = ir.text("text");
        req.principles = ir.text_list("principles");
        return req;
      });
  return out;
}

EthicalReview read_ethical_review(ObjectReader& r, Sink& sink) {
  EthicalReview out;
  out.use_case = r.text("use_case");
  out.impacted_groups =
      r.list<ImpactedGroup>("impacted_groups", Need::required, [&](const json& j, const std::string& p) {
        ObjectReader ir(j, p, sink);
        return ImpactedGroup{ir.text("group"), ir.text("impact")};
      });
  out.reviewers = r.list<Reviewer>("reviewers", Need::required, [&](const json& j, const std::string& p) {
    ObjectReader ir(j, p, sink);
    return Reviewer{ir.text("name"), ir.text("affiliation", Need::optional), ir.text("standpoint")};
  });
  out.board_decision = r.enumeration("board_decision", &parse_board_decision, BoardDecision::reject);
  out.conditions = r.text_list("conditions");
  return out;
}

SocialImpactAssessment read_sia(ObjectReader& r, Sink& sink) {
  SocialImpactAssessment out;
  out.impact_entries =
      r.list<ImpactEntry>("impact_entries", Need::required, [&](const json& j, const std::string& p) {
        ObjectReader ir(j, p, sink);
        ImpactEntry e;
        e.category = ir.enumeration("category", &parse_impact_category, ImpactCategory::ways_of_life);
        e.description = ir.text("description");
        e.severity = ir.integer("severity");
        return e;
      });
  out.overall_severity = r.integer("overall_severity");
  return out;
}

StakeholderMap read_stakeholders(ObjectReader& r, Sink& sink) {
  StakeholderMap out;
  out.stakeholders =
      r.list<Stakeholder>("stakeholders", Need::required, [&](const json& j, const std::string& p) {
        ObjectReader ir(j, p, sink);
        return Stakeholder{ir.text("name"), ir.text("role"), ir.text("contact", Need::optional),
                           ir.text("contribution", Need::optional)};
      });
  return out;
}

FieldStudyReport read_field_study(ObjectReader& r, Sink& sink) {
  FieldStudyReport out;
  out.interviews = r.list<Interview>("interviews", Need::required, [&](const json& j, const std::string& p) {
    ObjectReader ir(j, p, sink);
    Interview iv;
    iv.role = ir.text("role");
    iv.transcript_ref = ir.text("transcript_ref", Need::optional);
    iv.findings = ir.text_list("findings", Need::required);
    return iv;
  });
  return out;
}

SystemMap read_system_map(ObjectReader& r, Sink& sink) {
  SystemMap out;
  out.components =
      r.list<SystemComponent>("components", Need::required, [&](const json& j, const std::string& p) {
        ObjectReader ir(j, p, sink);
        return SystemComponent{ir.text("id"), ir.text("name"), ir.text("description", Need::optional)};
      });
  out.flows = r.list<SystemFlow>("flows", Need::optional, [&](const json& j, const std::string& p) {
    ObjectReader ir(j, p, sink);
    return SystemFlow{ir.text("from"), ir.text("to"), ir.text("description", Need::optional)};
  });
  return out;
}

DesignHistoryReview read_dhr(ObjectReader& r, Sink& sink) {
  DesignHistoryReview out;
  out.documents =
      r.list<ReviewedDocument>("documents", Need::required, [&](const json& j, const std::string& p) {
        ObjectReader ir(j, p, sink);
        return ReviewedDocument{ir.text("title"), ir.text("ref", Need::optional),
                                ir.text("summary", Need::optional)};
      });
  out.decisions =
      r.list<DesignDecision>("decisions", Need::optional, [&](const json& j, const std::string& p) {
        ObjectReader ir(j, p, sink);
        return DesignDecision{ir.text("id"), ir.text("date", Need::optional), ir.text("summary")};
      });
  return out;
}

// The FMEA is a columnar table: a header row naming the columns and one array
// per entry. Columns may appear in any order on input.
void read_fmea_cell(FmeaEntry& e, std::string_view column, const json& cell, const std::string& path,
                    Sink& sink) {
  auto want_text = [&](std::string& out) {
    if (cell.is_null()) return;
    if (!cell.is_string()) return sink.add("E_BAD_VALUE", path, "expected string");
    out = cell.get<std::string>();
  };
  auto want_int = [&](std::optional<int>& out) {
    if (cell.is_null()) return;
    if (!cell.is_number_integer()) return sink.add("E_BAD_VALUE", path, "expected integer or null");
    const auto wide = cell.get<std::int64_t>();
    if (wide < INT32_MIN || wide > INT32_MAX) return sink.add("E_BAD_VALUE", path, "integer out of range");
    out = static_cast<int>(wide);
  };
  auto want_list = [&](std::vector<std::string>& out) {
    if (cell.is_null()) return;
    if (!cell.is_array()) return sink.add("E_BAD_VALUE", path, "expected array of strings");
    for (const auto& v : cell) {
      if (!v.is_string()) return sink.add("E_BAD_VALUE", path, "expected array of strings");
      out.push_back(v.get<std::string>());
    }
  };
  if (column == "id") return want_text(e.id);
  if (column == "failure_mode") return want_text(e.failure_mode);
  if (column == "effect") return want_text(e.effect);
  if (column == "cause") return want_text(e.cause);
  if (column == "severity") return want_int(e.severity);
  if (column == "likelihood") return want_int(e.likelihood);
  if (column == "detection") return want_int(e.detection);
  if (column == "status") {
    std::string s;
    want_text(s);
    if (auto st = parse_fmea_status(s)) {
      e.status = *st;
    } else {
      sink.add("E_BAD_VALUE", path, "unknown status '" + s + "'");
    }
    return;
  }
  if (column == "threatened_principles") return want_list(e.threatened_principles);
  if (column == "evidence_refs") return want_list(e.evidence_refs);
  if (column == "rationale") return want_text(e.rationale);
}

FmeaRegister read_fmea(ObjectReader& r, Sink& sink) {
  FmeaRegister out;
  std::vector<std::string> columns = r.text_list("columns", Need::required);
  std::vector<bool> known(columns.size(), false);
  std::set<std::string> seen;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const bool in_schema =
        std::find(kFmeaColumns.begin(), kFmeaColumns.end(), columns[i]) != kFmeaColumns.end();
    if (!in_schema) {
      sink.add("E_UNKNOWN_FIELD", index_path(r.child("columns"), i), "unknown column '" + columns[i] + "'");
    } else if (!seen.insert(columns[i]).second) {
      sink.add("E_BAD_VALUE", index_path(r.child("columns"), i), "duplicate column '" + columns[i] + "'");
    } else {
      known[i] = true;
    }
  }
  if (r.get("columns", Need::optional)) {
    for (std::string_view required : {"id", "failure_mode", "status", "threatened_principles"}) {
      if (!seen.count(std::string(required))) {
        sink.add("E_MISSING_FIELD", r.child("columns"), "missing column '" + std::string(required) + "'");
      }
    }
  }
  out.entries = r.list<FmeaEntry>("records", Need::required, [&](const json& j, const std::string& p) {
    FmeaEntry e;
    if (!j.is_array()) {
      sink.add("E_BAD_VALUE", p, "expected record array");
      return e;
    }
    if (j.size() != columns.size()) {
      sink.add("E_BAD_VALUE", p,
               "record has " + std::to_string(j.size()) + " cells, header has " +
                   std::to_string(columns.size()));
      return e;
    }
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (known[c]) read_fmea_cell(e, columns[c], j[c], index_path(p, c), sink);
    }
    return e;
  });
  return out;
}

DesignChecklist read_checklist(ObjectReader& r, Sink& sink) {
  DesignChecklist out;
  out.items = r.list<ChecklistItem>("items", Need::required, [&](const json& j, const std::string& p) {
    ObjectReader ir(j, p, sink);
    ChecklistItem item;
    item.id = ir.text("id");
    item.prompt = ir.text("prompt");
    item.expected_artifact = ir.opt_enumeration("expected_artifact", &parse_kind);
    item.response = ir.text("response", Need::optional);
    item.satisfied = ir.enumeration("satisfied", &parse_answer, ChecklistAnswer::no);
    item.justification = ir.text("justification", Need::optional);
    return item;
  });
  return out;
}

ModelCard read_model_card(ObjectReader& r, Sink& sink) {
  ModelCard out;
  out.model_name = r.text("model_name");
  out.intended_use = r.text("intended_use");
  out.out_of_scope_uses = r.text_list("out_of_scope_uses");
  out.evaluation_data = r.text("evaluation_data", Need::optional);
  out.performance_by_group = r.list<GroupPerformance>(
      "performance_by_group", Need::optional, [&](const json& j, const std::string& p) {
        ObjectReader ir(j, p, sink);
        GroupPerformance g;
        g.group = ir.text("group");
        g.metric_name = ir.text("metric_name");
        g.value = ir.number("value");
        return g;
      });
  out.limitations = r.text("limitations", Need::optional);
  return out;
}

Datasheet read_datasheet(ObjectReader& r, Sink& sink) {
  Datasheet out;
  out.dataset_name = r.text("dataset_name");
  out.collection_process = r.text("collection_process");
  out.ethical_review_conducted =
      r.enumeration("ethical_review_conducted", &parse_tristate, TriState::unknown);
  out.relates_to_people = r.enumeration("relates_to_people", &parse_tristate, TriState::unknown);
  out.demographic_breakdown = r.list<DemographicAxis>(
      "demographic_breakdown", Need::optional, [&](const json& j, const std::string& p) {
        ObjectReader ar(j, p, sink);
        DemographicAxis axis;
        axis.axis = ar.text("axis");
        axis.groups = ar.list<GroupFraction>("groups", Need::required, [&](const json& gj, const std::string& gp) {
          ObjectReader gr(gj, gp, sink);
          GroupFraction g;
          g.label = gr.text("label");
          g.fraction = gr.number("fraction");
          return g;
        });
        return axis;
      });
  return out;
}

AdversarialTestingReport read_atr(ObjectReader& r, Sink& sink) {
  AdversarialTestingReport out;
  out.test_cases = r.list<TestCase>("test_cases", Need::required, [&](const json& j, const std::string& p) {
    ObjectReader ir(j, p, sink);
    TestCase tc;
    tc.id = ir.text("id");
    tc.target_fmea = ir.text("target_fmea");
    tc.description = ir.text("description");
    tc.slice = ir.text("slice", Need::optional);
    tc.trials = ir.integer("trials");
    tc.failures = ir.integer("failures");
    if (const json* ne = ir.get("new_entry", Need::optional)) {
      ObjectReader nr(*ne, ir.child("new_entry"), sink);
      NewFailureMode m;
      m.id = nr.text("id");
      m.failure_mode = nr.text("failure_mode");
      m.effect = nr.text("effect", Need::optional);
      m.cause = nr.text("cause", Need::optional);
      m.severity = nr.integer("severity");
      m.threatened_principles = nr.text_list("threatened_principles", Need::required);
      tc.new_entry = std::move(m);
    }
    return tc;
  });
  return out;
}

EthicalRiskChart read_erc(ObjectReader& r, Sink& sink) {
  EthicalRiskChart out;
  out.rows = r.list<ChartRow>("rows", Need::required, [&](const json& j, const std::string& p) {
    ObjectReader ir(j, p, sink);
    ChartRow row;
    row.fmea_id = ir.text("fmea_id");
    row.severity = ir.integer("severity");
    row.likelihood = ir.integer("likelihood");
    row.risk_class = ir.enumeration("risk_class", &parse_risk_class, RiskClass::low);
    row.rationale = ir.text("rationale", Need::optional);
    return row;
  });
  return out;
}

RemediationPlan read_remediation(ObjectReader& r, Sink& sink) {
  RemediationPlan out;
  out.items = r.list<RemediationItem>("items", Need::required, [&](const json& j, const std::string& p) {
    ObjectReader ir(j, p, sink);
    RemediationItem item;
    item.id = ir.text("id");
    item.fmea_id = ir.text("fmea_id");
    item.action = ir.text("action");
    item.owner = ir.text("owner", Need::optional);
    item.status = ir.enumeration("status", &parse_mitigation_status, MitigationStatus::planned);
    return item;
  });
  return out;
}

AuditSummaryReport read_summary(ObjectReader& r, Sink& sink) {
  AuditSummaryReport out;
  out.verdict = r.enumeration("verdict", &parse_verdict, Verdict::stall);
  out.principle_findings = r.list<PrincipleFinding>(
      "principle_findings", Need::required, [&](const json& j, const std::string& p) {
        ObjectReader ir(j, p, sink);
        PrincipleFinding f;
        f.principle = ir.text("principle");
        f.worst_class = ir.enumeration("worst_class", &parse_risk_class, RiskClass::low);
        if (const json* u = ir.get("unexamined", Need::required)) {
          if (u->is_boolean()) {
            f.unexamined = u->get<bool>();
          } else {
            sink.add("E_BAD_VALUE", ir.child("unexamined"), "expected boolean");
          }
        }
        f.fmea_ids = ir.text_list("fmea_ids");
        return f;
      });
  out.gap_errors = r.integer("gap_errors");
  out.gap_warnings = r.integer("gap_warnings");
  out.gap_codes = r.text_list("gap_codes");
  out.checklist_completeness = r.number("checklist_completeness");
  out.conditions = r.text_list("conditions");
  out.adhf_hash = r.text("adhf_hash");
  return out;
}

ArtifactBody read_body(ArtifactKind kind, ObjectReader& r, Sink& sink) {
  switch (kind) {
    case ArtifactKind::PrinciplesDeclaration: return read_principles(r, sink);
    case ArtifactKind::ProductRequirementsDoc: return read_prd(r, sink);
    case ArtifactKind::EthicalReview: return read_ethical_review(r, sink);
    case ArtifactKind::SocialImpactAssessment: return read_sia(r, sink);
    case ArtifactKind::StakeholderMap: return read_stakeholders(r, sink);
    case ArtifactKind::FieldStudyReport: return read_field_study(r, sink);
    case ArtifactKind::SystemMap: return read_system_map(r, sink);
    case ArtifactKind::DesignHistoryReview: return read_dhr(r, sink);
    case ArtifactKind::Fmea: return read_fmea(r, sink);
    case ArtifactKind::DesignChecklist: return read_checklist(r, sink);
    case ArtifactKind::ModelCard: return read_model_card(r, sink);
    case ArtifactKind::Datasheet: return read_datasheet(r, sink);
    case ArtifactKind::AdversarialTestingReport: return read_atr(r, sink);
    case ArtifactKind::EthicalRiskChart: return read_erc(r, sink);
    case ArtifactKind::RemediationPlan: return read_remediation(r, sink);
    case ArtifactKind::AuditSummaryReport: return read_summary(r, sink);
  }
  return PrinciplesDeclaration{};
}

bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

}  // namespace

Result<ArtifactDocument> parse_artifact(std::string_view raw_document,
                                        std::optional<ArtifactKind> expected_kind) {
  return parse_artifact(raw_document, ParseOptions{expected_kind, true});
}

Result<ArtifactDocument> parse_artifact(std::string_view raw_document, const ParseOptions& options) {
  if (is_blank(raw_document)) return make_diag("E_PARSE", "", "", "empty document");

  json root;
  try {
    root = json::parse(raw_document.begin(), raw_document.end());
  } catch (const json::parse_error& e) {
    return make_diag("E_PARSE", "", "", e.what());
  }
  if (!root.is_object()) return make_diag("E_PARSE", "", "", "document root must be an object");

  Sink sink;
  ArtifactDocument doc;
  std::optional<ArtifactKind> kind;
  const json* body_json = nullptr;
  {
    ObjectReader top(root, "", sink);
    if (const json* meta = top.get("meta", Need::required)) {
      // Peek the id first so every later diagnostic carries it.
      if (meta->is_object() && meta->contains("id") && (*meta)["id"].is_string()) {
        sink.artifact_id = (*meta)["id"].get<std::string>();
      }
      ObjectReader m(*meta, "meta", sink);
      doc.meta.id = m.text("id");
      const std::string kind_text = m.text("kind");
      if (m.get("kind", Need::optional) && (*meta)["kind"].is_string()) {
        kind = parse_kind(kind_text);
        if (!kind) sink.add("E_PARSE", "meta.kind", "unknown artifact kind '" + kind_text + "'");
      }
      doc.meta.producer = m.enumeration("producer", &parse_producer, ProducerRole::auditor);
      doc.meta.stage = m.enumeration("stage", &parse_stage, Stage::Scoping);
      doc.meta.version = m.integer("version");
      doc.meta.created_at = m.text("created_at");
      doc.meta.content_hash = m.text("content_hash");
      doc.meta.status = m.enumeration("status", &parse_status, ArtifactStatus::draft);
      doc.meta.supersedes = m.opt_text("supersedes");
    }
    body_json = top.get("body", Need::required);
  }

  if (kind && options.expected_kind && *kind != *options.expected_kind) {
    return make_diag("E_KIND_MISMATCH", sink.artifact_id, "meta.kind",
                     "expected " + std::string(to_string(*options.expected_kind)) + ", found " +
                         std::string(to_string(*kind)));
  }

  if (kind && body_json) {
    doc.meta.kind = *kind;
    ObjectReader b(*body_json, "body", sink);
    doc.body = read_body(*kind, b, sink);
    doc.evidences = b.text_list("evidences");
  }

  if (sink.failed()) {
    Diagnostics diags = sink.take();
    sort_diagnostics(diags);
    return diags;
  }

  if (options.verify_hash) {
    const std::string actual = hash_artifact(canonical_bytes(*body_json));
    if (actual != doc.meta.content_hash) {
      return make_diag("E_HASH_MISMATCH", doc.meta.id, "meta.content_hash",
                       "recorded " + doc.meta.content_hash + ", body hashes to " + actual);
    }
  }
  return doc;
}

}  // namespace smactr
