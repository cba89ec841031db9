#include "smactr/manifest.hpp"

#include "object_reader.hpp"

namespace smactr {

using detail::Need;
using detail::ObjectReader;
using detail::Sink;

std::string_view to_string(Profile p) { return p == Profile::full ? "full" : "light"; }

std::optional<Profile> parse_profile(std::string_view text) {
  if (text == "full") return Profile::full;
  if (text == "light") return Profile::light;
  return std::nullopt;
}

ProducerRole Manifest::producer_for(ArtifactKind k) const {
  auto it = role_overrides.find(k);
  return it != role_overrides.end() ? it->second : default_producer(k);
}

namespace {

std::vector<RequirementChange> read_changes(ObjectReader& r, std::string_view key, Sink& sink, bool with_status) {
  return r.list<RequirementChange>(key, Need::optional, [&](const json& j, const std::string& p) {
    ObjectReader cr(j, p, sink);
    RequirementChange c;
    c.kind = cr.enumeration("kind", &parse_kind, ArtifactKind::PrinciplesDeclaration);
    c.stage = cr.enumeration("stage", &parse_stage, Stage::Scoping);
    if (with_status) {
      c.min_status = cr.enumeration("min_status", &parse_status, ArtifactStatus::final, Need::optional);
    }
    return c;
  });
}

}  // namespace

Result<Manifest> parse_manifest(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    return make_diag("E_PARSE", "manifest", "", e.what());
  }
  Sink sink;
  sink.artifact_id = "manifest";
  Manifest m;
  {
    ObjectReader r(root, "", sink);
    m.audit_id = r.text("audit_id");
    m.product = r.text("product", Need::optional);
    m.profile = r.enumeration("profile", &parse_profile, Profile::full, Need::optional);
    if (auto pf = r.opt_text("principles_file")) m.principles_file = *pf;

    if (const json* ro = r.get("role_overrides", Need::optional)) {
      if (!ro->is_object()) {
        sink.add("E_BAD_VALUE", "role_overrides", "expected object");
      } else {
        for (auto it = ro->begin(); it != ro->end(); ++it) {
          auto kind = parse_kind(it.key());
          auto role = it->is_string() ? parse_producer(it->get<std::string>()) : std::nullopt;
          if (!kind || !role) {
            sink.add("E_BAD_VALUE", "role_overrides." + it.key(), "expected ArtifactKind: producer role");
            continue;
          }
          m.role_overrides[*kind] = *role;
        }
      }
    }
    if (const json* ro = r.get("requirement_overrides", Need::optional)) {
      ObjectReader orr(*ro, "requirement_overrides", sink);
      m.add_requirements = read_changes(orr, "add", sink, true);
      m.remove_requirements = read_changes(orr, "remove", sink, false);
    }
    if (const json* rm = r.get("risk_matrix", Need::optional)) {
      bool ok = rm->is_array() && rm->size() == 5;
      RiskMatrix matrix;
      for (std::size_t s = 0; ok && s < 5; ++s) {
        const json& row = (*rm)[s];
        ok = row.is_array() && row.size() == 5;
        for (std::size_t l = 0; ok && l < 5; ++l) {
          auto cls = row[l].is_string() ? parse_risk_class(row[l].get<std::string>()) : std::nullopt;
          ok = cls.has_value();
          if (ok) matrix.cells[s][l] = *cls;
        }
      }
      if (!ok) {
        sink.add("E_BAD_VALUE", "risk_matrix", "expected 5x5 array of low/mid/high, rows by severity");
      } else {
        m.risk_matrix = matrix;
      }
    }
    if (r.get("skew_threshold", Need::optional)) m.skew_threshold = r.number("skew_threshold");
    m.risk_acceptance_threshold = r.opt_enumeration("risk_acceptance_threshold", &parse_risk_class);
    m.closed_question_verbs = r.text_list("closed_question_verbs");
    m.verdict_trigger_class =
        r.enumeration("verdict_trigger_class", &parse_risk_class, RiskClass::high, Need::optional);
  }
  Diagnostics diags = sink.take();
  if (m.risk_matrix && !m.risk_matrix->is_monotone()) {
    diags.push_back(make_diag("E_CONFIG", "manifest", "risk_matrix", "risk matrix must be monotone in both axes"));
  }
  if (!(m.skew_threshold >= 1.0)) {
    diags.push_back(make_diag("E_CONFIG", "manifest", "skew_threshold", "skew threshold must be >= 1"));
  }
  if (!diags.empty()) {
    sort_diagnostics(diags);
    return diags;
  }
  return m;
}

std::string serialize_manifest(const Manifest& m) {
  json roles = json::object();
  for (const auto& [k, r] : m.role_overrides) roles[std::string(to_string(k))] = to_string(r);
  json add = json::array();
  for (const auto& c : m.add_requirements) {
    add.push_back({{"kind", to_string(c.kind)}, {"stage", to_string(c.stage)}, {"min_status", to_string(c.min_status)}});
  }
  json remove = json::array();
  for (const auto& c : m.remove_requirements) {
    remove.push_back({{"kind", to_string(c.kind)}, {"stage", to_string(c.stage)}});
  }
  json matrix = nullptr;
  if (m.risk_matrix) {
    matrix = json::array();
    for (const auto& row : m.risk_matrix->cells) {
      json r = json::array();
      for (auto c : row) r.push_back(to_string(c));
      matrix.push_back(r);
    }
  }
  json root = {
      {"audit_id", m.audit_id},
      {"product", m.product},
      {"profile", to_string(m.profile)},
      {"principles_file", m.principles_file},
      {"role_overrides", roles},
      {"requirement_overrides", {{"add", add}, {"remove", remove}}},
      {"risk_matrix", matrix},
      {"skew_threshold", m.skew_threshold},
      {"risk_acceptance_threshold",
       m.risk_acceptance_threshold ? json(to_string(*m.risk_acceptance_threshold)) : json(nullptr)},
      {"closed_question_verbs", m.closed_question_verbs},
      {"verdict_trigger_class", to_string(m.verdict_trigger_class)},
  };
  return root.dump(2) + "\n";
}

}  // namespace smactr
