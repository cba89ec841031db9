#include "smactr/trace.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "smactr/repository.hpp"

namespace smactr {

namespace {

struct KindName {
  NodeKind kind;
  std::string_view name;
  std::string_view prefix;
};

constexpr KindName kNodeKinds[] = {
    {NodeKind::principle, "principle", "principle"}, {NodeKind::requirement, "requirement", "requirement"},
    {NodeKind::risk, "risk", "risk"},                {NodeKind::test_case, "test_case", "test"},
    {NodeKind::mitigation, "mitigation", "mitigation"}, {NodeKind::artifact, "artifact", "artifact"},
    {NodeKind::decision, "decision", "decision"},
};

constexpr std::pair<EdgeKind, std::string_view> kEdgeKinds[] = {
    {EdgeKind::threatens, "threatens"}, {EdgeKind::derives_from, "derives_from"},
    {EdgeKind::exercises, "exercises"}, {EdgeKind::mitigates, "mitigates"},
    {EdgeKind::evidences, "evidences"}, {EdgeKind::supersedes, "supersedes"},
};

}  // namespace

std::string_view to_string(NodeKind k) {
  for (const auto& n : kNodeKinds) {
    if (n.kind == k) return n.name;
  }
  return "?";
}

std::string_view to_string(EdgeKind k) {
  for (const auto& [kind, name] : kEdgeKinds) {
    if (kind == k) return name;
  }
  return "?";
}

std::optional<NodeKind> parse_node_kind(std::string_view text) {
  for (const auto& n : kNodeKinds) {
    if (n.name == text) return n.kind;
  }
  return std::nullopt;
}

std::optional<EdgeKind> parse_edge_kind(std::string_view text) {
  for (const auto& [kind, name] : kEdgeKinds) {
    if (name == text) return kind;
  }
  return std::nullopt;
}

std::string node_id(NodeKind kind, std::string_view local_id) {
  for (const auto& n : kNodeKinds) {
    if (n.kind == kind) return std::string(n.prefix) + ":" + std::string(local_id);
  }
  return std::string(local_id);
}

// --- graph --------------------------------------------------------------

const TraceNode* TraceGraph::node(std::string_view id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                             [](const TraceNode& n, std::string_view key) { return n.id < key; });
  return it != nodes.end() && it->id == id ? &*it : nullptr;
}

bool TraceGraph::has_edge(const TraceEdge& e) const { return std::binary_search(edges.begin(), edges.end(), e); }

std::vector<const TraceEdge*> TraceGraph::incoming(std::string_view id, EdgeKind kind) const {
  std::vector<const TraceEdge*> out;
  for (const auto& e : edges) {
    if (e.to == id && e.kind == kind) out.push_back(&e);
  }
  return out;
}

std::vector<const TraceEdge*> TraceGraph::outgoing(std::string_view id, EdgeKind kind) const {
  std::vector<const TraceEdge*> out;
  for (const auto& e : edges) {
    if (e.from == id && e.kind == kind) out.push_back(&e);
  }
  return out;
}

bool edge_allowed(EdgeKind kind, NodeKind from, NodeKind to) {
  switch (kind) {
    case EdgeKind::threatens:
      return from == NodeKind::risk && to == NodeKind::principle;
    case EdgeKind::derives_from:
      return from == NodeKind::requirement && to == NodeKind::principle;
    case EdgeKind::exercises:
      return from == NodeKind::test_case && to == NodeKind::risk;
    case EdgeKind::mitigates:
      return from == NodeKind::mitigation && to == NodeKind::risk;
    case EdgeKind::evidences:
      return from == NodeKind::artifact && (to == NodeKind::decision || to == NodeKind::requirement);
    case EdgeKind::supersedes:
      return from == NodeKind::artifact && to == NodeKind::artifact;
  }
  return false;
}

Diagnostics check_graph(const TraceGraph& graph) {
  Diagnostics out;
  for (std::size_t i = 1; i < graph.nodes.size(); ++i) {
    if (graph.nodes[i].id == graph.nodes[i - 1].id) {
      out.push_back(make_diag("E_DUPLICATE_ID", graph.nodes[i].source_artifact, graph.nodes[i].id,
                              "node id used more than once"));
    }
  }
  for (const auto& e : graph.edges) {
    const TraceNode* from = graph.node(e.from);
    const TraceNode* to = graph.node(e.to);
    const std::string src = from ? from->source_artifact : "";
    const std::string label = e.from + " " + std::string(to_string(e.kind)) + " " + e.to;
    if (!from || !to) {
      out.push_back(make_diag("E_DANGLING_REF", src, e.from, label + ": unknown " + (from ? e.to : e.from)));
      continue;
    }
    if (e.from == e.to) {
      out.push_back(make_diag("E_BAD_VALUE", src, e.from, label + ": self-loop"));
    } else if (!edge_allowed(e.kind, from->kind, to->kind)) {
      out.push_back(make_diag("E_BAD_VALUE", src, e.from,
                              label + ": not a " + std::string(to_string(from->kind)) + " to " +
                                  std::string(to_string(to->kind)) + " edge"));
    }
  }

  std::map<std::string, std::string> next;
  for (const auto& e : graph.edges) {
    if (e.kind == EdgeKind::supersedes && e.from != e.to) next[e.from] = e.to;
  }
  std::set<std::string> in_reported_cycle;
  for (const auto& [start, _] : next) {
    if (in_reported_cycle.count(start)) continue;
    std::set<std::string> seen{start};
    std::string cur = start;
    while (next.count(cur)) {
      cur = next[cur];
      if (cur == start) {
        const TraceNode* n = graph.node(start);
        out.push_back(make_diag("E_SUPERSEDES_CYCLE", n ? n->source_artifact : "", start,
                                "supersedes chain returns to " + start));
        in_reported_cycle.insert(seen.begin(), seen.end());
        break;
      }
      if (!seen.insert(cur).second) break;
    }
  }
  sort_diagnostics(out);
  return out;
}

std::string repo_content_hash(const AuditRepository& repo) {
  std::vector<ArtifactVersion> versions;
  for (const auto& a : repo.artifacts) {
    if (a.doc.kind() == ArtifactKind::AuditSummaryReport) continue;
    versions.push_back({a.doc.meta.id, a.doc.meta.version, compute_content_hash(a.doc)});
  }
  return inputs_hash(std::move(versions));
}

namespace {

class GraphBuilder {
 public:
  explicit GraphBuilder(TraceGraph& g) : g_(g) {}

  std::string add(NodeKind kind, std::string_view local_id, const ArtifactDocument& source,
                         std::map<std::string, std::string> attrs = {}) {
    g_.nodes.push_back({node_id(kind, local_id), kind, source.meta.id, source.meta.created_at, std::move(attrs)});
    return g_.nodes.back().id;
  }

  void edge(std::string from, EdgeKind kind, std::string to) {
    g_.edges.push_back({std::move(from), std::move(to), kind});
  }

 private:
  TraceGraph& g_;
};

std::map<std::string, std::string> risk_attrs(const FmeaEntry& e, const RiskMatrix& matrix) {
  std::map<std::string, std::string> attrs{{"status", std::string(to_string(e.status))}};
  if (e.severity) attrs["severity"] = std::to_string(*e.severity);
  if (e.likelihood) attrs["likelihood"] = std::to_string(*e.likelihood);
  if (auto cls = entry_class(e, matrix)) attrs["class"] = std::string(to_string(*cls));
  return attrs;
}

}  // namespace

Result<TraceGraph> build_graph(const AuditRepository& repo, const std::string& generated_at) {
  TraceGraph g;
  g.generated_at = generated_at;
  g.repo_hash = repo_content_hash(repo);
  GraphBuilder b(g);
  const RiskMatrix matrix = repo.manifest.matrix();

  for (const auto& a : repo.artifacts) {
    if (a.file == repo.manifest.principles_file) {
      if (const auto* decl = a.doc.as<PrinciplesDeclaration>()) {
        for (const auto& p : decl->principles) b.add(NodeKind::principle, p.id, a.doc);
      }
    }
  }

  std::set<std::string> requirement_ids;
  for (const auto* a : repo.of_kind(ArtifactKind::ProductRequirementsDoc)) {
    for (const auto& r : a->doc.as<ProductRequirementsDoc>()->requirements) requirement_ids.insert(r.id);
  }

  for (const auto& a : repo.artifacts) {
    const ArtifactDocument& doc = a.doc;
    if (doc.kind() == ArtifactKind::AuditSummaryReport) continue;
    const std::string self = b.add(NodeKind::artifact, doc.meta.id, doc,
                                   {{"kind", std::string(to_string(doc.kind()))},
                                    {"version", std::to_string(doc.meta.version)},
                                    {"status", std::string(to_string(doc.meta.status))}});
    for (const auto& ref : doc.evidences) {
      const NodeKind target = requirement_ids.count(ref) ? NodeKind::requirement : NodeKind::decision;
      b.edge(self, EdgeKind::evidences, node_id(target, ref));
    }
    if (doc.meta.supersedes) b.edge(self, EdgeKind::supersedes, node_id(NodeKind::artifact, *doc.meta.supersedes));

    if (const auto* prd = doc.as<ProductRequirementsDoc>()) {
      for (const auto& r : prd->requirements) {
        const std::string id = b.add(NodeKind::requirement, r.id, doc);
        for (const auto& p : r.principles) b.edge(id, EdgeKind::derives_from, node_id(NodeKind::principle, p));
      }
    } else if (const auto* dhr = doc.as<DesignHistoryReview>()) {
      for (const auto& d : dhr->decisions) b.add(NodeKind::decision, d.id, doc);
    } else if (const auto* reg = doc.as<FmeaRegister>()) {
      for (const auto& e : reg->entries) {
        const std::string id = b.add(NodeKind::risk, e.id, doc, risk_attrs(e, matrix));
        for (const auto& p : e.threatened_principles) {
          b.edge(id, EdgeKind::threatens, node_id(NodeKind::principle, p));
        }
      }
    } else if (const auto* atr = doc.as<AdversarialTestingReport>()) {
      for (const auto& tc : atr->test_cases) {
        const std::string id = b.add(NodeKind::test_case, tc.id, doc,
                                     {{"trials", std::to_string(tc.trials)}, {"failures", std::to_string(tc.failures)}});
        std::string target = tc.target_fmea;
        if (target == kNewFmeaTarget && tc.new_entry) target = tc.new_entry->id;
        b.edge(id, EdgeKind::exercises, node_id(NodeKind::risk, target));
      }
    } else if (const auto* plan = doc.as<RemediationPlan>()) {
      for (const auto& item : plan->items) {
        const std::string id = b.add(NodeKind::mitigation, item.id, doc, {{"status", std::string(to_string(item.status))}});
        b.edge(id, EdgeKind::mitigates, node_id(NodeKind::risk, item.fmea_id));
      }
    }
  }

  std::sort(g.nodes.begin(), g.nodes.end(), [](const TraceNode& x, const TraceNode& y) { return x.id < y.id; });
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());

  Diagnostics diags = check_graph(g);
  if (has_errors(diags)) return diags;
  return g;
}

namespace {

std::string graph_body(const TraceGraph& g) {
  std::ostringstream os;
  os << "repo_hash\t" << g.repo_hash << '\n';
  os << "nodes\t" << g.nodes.size() << "\tedges\t" << g.edges.size() << '\n';
  std::map<std::string, std::vector<const TraceEdge*>> out_edges;
  for (const auto& e : g.edges) out_edges[e.from].push_back(&e);
  for (const auto& n : g.nodes) {
    os << n.id << '\t' << to_string(n.kind) << '\t' << n.source_artifact << '\t' << n.created_at;
    std::string attrs;
    for (const auto& [k, v] : n.attrs) attrs += (attrs.empty() ? "" : ";") + k + "=" + v;
    os << '\t' << (attrs.empty() ? "-" : attrs) << '\n';
    for (const TraceEdge* e : out_edges[n.id]) os << "  " << to_string(e->kind) << '\t' << e->to << '\n';
  }
  return os.str();
}

}  // namespace

std::string serialize_graph(const TraceGraph& graph) {
  return "adhf\t1\ngenerated_at\t" + (graph.generated_at.empty() ? std::string("-") : graph.generated_at) + "\n" +
         "graph_hash\t" + graph_hash(graph) + "\n" + graph_body(graph);
}

std::string graph_hash(const TraceGraph& graph) { return sha256_hex(graph_body(graph)); }

// --- gaps ---------------------------------------------------------------

namespace {

bool mitigation_counts(const TraceNode& n) {
  auto it = n.attrs.find("status");
  if (it == n.attrs.end()) return true;
  return it->second == to_string(MitigationStatus::planned) || it->second == to_string(MitigationStatus::verified);
}

int attr_int(const TraceNode& n, const std::string& key) {
  auto it = n.attrs.find(key);
  if (it == n.attrs.end()) return 0;
  try {
    return std::stoi(it->second);
  } catch (const std::exception&) {
    return 0;
  }
}

}  // namespace

Diagnostics find_gaps(const TraceGraph& graph, const RiskRegister& reg, const RiskMatrix& matrix) {
  Diagnostics out;
  for (const auto& e : reg.entries) {
    if (e.status != FmeaStatus::open || entry_class(e, matrix) != RiskClass::high) continue;
    const std::string id = node_id(NodeKind::risk, e.id);
    if (!graph.incoming(id, EdgeKind::exercises).empty()) continue;
    const TraceNode* n = graph.node(id);
    out.push_back(make_diag("W_UNTESTED_RISK", n ? n->source_artifact : "", id,
                            "open high risk '" + e.id + "' is not exercised by any test case"));
  }
  for (const auto& n : graph.nodes) {
    switch (n.kind) {
      case NodeKind::test_case: {
        if (attr_int(n, "failures") <= 0) break;
        bool mitigated = false;
        for (const TraceEdge* ex : graph.outgoing(n.id, EdgeKind::exercises)) {
          for (const TraceEdge* m : graph.incoming(ex->to, EdgeKind::mitigates)) {
            const TraceNode* mn = graph.node(m->from);
            if (mn && mitigation_counts(*mn)) mitigated = true;
          }
        }
        if (!mitigated) {
          std::string risks;
          for (const TraceEdge* ex : graph.outgoing(n.id, EdgeKind::exercises)) {
            risks += (risks.empty() ? "" : ", ") + ex->to;
          }
          out.push_back(make_diag("W_UNMITIGATED_FAILURE", n.source_artifact, n.id,
                                  "failed test has no mitigation path" +
                                      (risks.empty() ? std::string(" (exercises no risk)") : " (exercises " + risks + ")")));
        }
        break;
      }
      case NodeKind::principle:
        if (graph.incoming(n.id, EdgeKind::threatens).empty() && graph.incoming(n.id, EdgeKind::derives_from).empty()) {
          out.push_back(make_diag("W_UNEXAMINED_PRINCIPLE", n.source_artifact, n.id,
                                  "no risk threatens and no requirement derives from this principle"));
        }
        break;
      case NodeKind::requirement:
        if (graph.incoming(n.id, EdgeKind::evidences).empty()) {
          out.push_back(make_diag("E_ORPHAN_REQUIREMENT", n.source_artifact, n.id,
                                  "no artifact evidences this requirement"));
        }
        break;
      default:
        break;
    }
  }
  sort_diagnostics(out);
  return out;
}

// --- trail --------------------------------------------------------------

Result<std::vector<TrailEvent>> reconstruct_trail(const AuditRepository& repo) {
  Diagnostics diags;
  const auto& history = repo.history;

  std::map<std::string, const HistoryRecord*> last;
  for (const auto& r : history) {
    const auto it = last.find(r.artifact_id);
    const int expected = it == last.end() ? 1 : it->second->version + 1;
    if (r.version != expected) {
      diags.push_back(make_diag("E_HISTORY_GAP", r.artifact_id, "meta.version",
                                "history records version " + std::to_string(r.version) + " where " +
                                    std::to_string(expected) + " was expected"));
    }
    last[r.artifact_id] = &r;
  }

  std::set<std::string> present;
  for (const auto& a : repo.artifacts) {
    const std::string& id = a.doc.meta.id;
    present.insert(id);
    const auto it = last.find(id);
    if (it == last.end()) {
      diags.push_back(make_diag("E_HISTORY_GAP", id, "meta.version", "artifact has no recorded history"));
      continue;
    }
    const HistoryRecord& rec = *it->second;
    if (a.doc.meta.version != rec.version) {
      diags.push_back(make_diag("E_HISTORY_GAP", id, "meta.version",
                                "version " + std::to_string(a.doc.meta.version) + " is not the recorded version " +
                                    std::to_string(rec.version)));
    } else if (compute_content_hash(a.doc) != rec.hash) {
      diags.push_back(make_diag("E_HISTORY_GAP", id, "meta.content_hash",
                                "content differs from recorded version " + std::to_string(rec.version)));
    }
  }
  for (const auto& [id, rec] : last) {
    if (!present.count(id)) {
      diags.push_back(make_diag("E_HISTORY_GAP", id, "", "recorded artifact is missing or unreadable"));
    }
  }

  for (std::size_t g = 0; g < repo.state.gate_log.size(); ++g) {
    const auto& entry = repo.state.gate_log[g];
    const std::string where = "gate_log[" + std::to_string(g) + "]";
    if (entry.history_length > history.size()) {
      diags.push_back(make_diag("E_HISTORY_GAP", kStateFile, where, "gate refers to history that does not exist"));
      continue;
    }
    if (entry.inputs_hash.empty()) continue;
    std::map<std::string, ArtifactVersion> at_gate;
    for (std::size_t i = 0; i < entry.history_length; ++i) {
      const auto& r = history[i];
      at_gate[r.artifact_id] = {r.artifact_id, r.version, r.hash};
    }
    std::vector<ArtifactVersion> versions;
    for (auto& [_, v] : at_gate) versions.push_back(v);
    if (inputs_hash(std::move(versions)) != entry.inputs_hash) {
      diags.push_back(make_diag("E_HISTORY_GAP", kStateFile, where,
                                "gate into " + std::string(to_string(entry.stage)) +
                                    " does not match the recorded artifact versions"));
    }
  }
  if (!diags.empty()) {
    sort_diagnostics(diags);
    return diags;
  }

  std::vector<TrailEvent> trail;
  std::size_t next_gate = 0;
  const auto& gates = repo.state.gate_log;
  auto flush_gates = [&](std::size_t position) {
    while (next_gate < gates.size() && gates[next_gate].history_length <= position) {
      const auto& e = gates[next_gate++];
      trail.push_back({e.timestamp, e.result == "pass" ? "gate_passed" : "gate_failed",
                       std::string(to_string(e.stage)), 0, e.inputs_hash, e});
    }
  };
  for (std::size_t i = 0; i < history.size(); ++i) {
    flush_gates(i);
    const auto& r = history[i];
    trail.push_back({r.timestamp, r.event, r.artifact_id, r.version, r.hash, std::nullopt});
  }
  flush_gates(history.size());
  return trail;
}

WorkflowState replay_state(const std::vector<TrailEvent>& trail) {
  WorkflowState state;
  std::size_t artifact_events = 0;
  for (const auto& ev : trail) {
    if (!ev.gate) {
      ++artifact_events;
      continue;
    }
    GateLogEntry entry = *ev.gate;
    entry.history_length = artifact_events;
    if (entry.result == "pass") state.current_stage = entry.stage;
    state.gate_log.push_back(std::move(entry));
  }
  return state;
}

std::string format_trail(const std::vector<TrailEvent>& trail) {
  std::ostringstream os;
  for (const auto& ev : trail) {
    os << ev.timestamp << '\t' << ev.event << '\t' << ev.subject << '\t'
       << (ev.gate ? std::string("-") : std::to_string(ev.version)) << '\t' << (ev.hash.empty() ? "-" : ev.hash)
       << '\n';
  }
  return os.str();
}

}  // namespace smactr
