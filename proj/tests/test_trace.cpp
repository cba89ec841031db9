#include <algorithm>
#include <functional>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "generators.hpp"
#include "smactr/repository.hpp"
#include "smactr/trace.hpp"
#include "test_util.hpp"

using namespace smactr;
using smactr::testing::Gen;
using smactr::testing::TempDir;

namespace {

TraceNode node(NodeKind kind, const std::string& local, std::map<std::string, std::string> attrs = {}) {
  return {node_id(kind, local), kind, "toy", "2026-01-01T00:00:00Z", std::move(attrs)};
}

TraceGraph make_graph(std::vector<TraceNode> nodes, std::vector<TraceEdge> edges) {
  TraceGraph g;
  g.nodes = std::move(nodes);
  g.edges = std::move(edges);
  std::sort(g.nodes.begin(), g.nodes.end(), [](const TraceNode& a, const TraceNode& b) { return a.id < b.id; });
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

std::set<std::pair<std::string, std::string>> code_paths(const Diagnostics& d) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& x : d) out.insert({x.code, x.path});
  return out;
}

RiskRegister toy_register() {
  FmeaEntry e;
  e.id = "r";
  e.failure_mode = "m";
  e.severity = 5;
  e.likelihood = 3;
  e.threatened_principles = {"p"};
  return RiskRegister{{e}};
}

const TraceEdge kThreatens{"risk:r", "principle:p", EdgeKind::threatens};
const TraceEdge kExercises{"test:t", "risk:r", EdgeKind::exercises};
const TraceEdge kMitigates{"mitigation:m", "risk:r", EdgeKind::mitigates};

std::vector<TraceNode> toy_nodes() {
  return {node(NodeKind::principle, "p"), node(NodeKind::risk, "r"),
          node(NodeKind::test_case, "t", {{"failures", "3"}, {"trials", "10"}}),
          node(NodeKind::mitigation, "m", {{"status", "planned"}})};
}

// Expected gaps of the toy graph, read directly off which edges remain.
std::set<std::pair<std::string, std::string>> toy_oracle(bool threatens, bool exercises, bool mitigates) {
  std::set<std::pair<std::string, std::string>> out;
  if (!threatens) out.insert({"W_UNEXAMINED_PRINCIPLE", "principle:p"});
  if (!exercises) out.insert({"W_UNTESTED_RISK", "risk:r"});
  if (!(exercises && mitigates)) out.insert({"W_UNMITIGATED_FAILURE", "test:t"});
  return out;
}

std::vector<ArtifactDocument> without(std::vector<ArtifactDocument> docs, const std::string& id) {
  docs.erase(std::remove_if(docs.begin(), docs.end(), [&](const ArtifactDocument& d) { return d.meta.id == id; }),
             docs.end());
  return docs;
}

}  // namespace

TEST_CASE("smile graph links the biometric risk to privacy") {
  const auto cs = fixtures::smile_booth();
  auto repo = fixtures::completed_repository(cs);
  REQUIRE(repo.ok());
  auto g = build_graph(*repo);
  REQUIRE(g.ok());
  CHECK(g->has_edge({"risk:fm-biometric", "principle:privacy", EdgeKind::threatens}));
  CHECK(g->has_edge({"risk:fm-subgroup", "principle:justice-fairness", EdgeKind::threatens}));
  CHECK(g->has_edge({"test:tc-occlusion", "risk:fm-occlusion", EdgeKind::exercises}));
  CHECK(g->has_edge({"mitigation:rp-optin", "risk:fm-biometric", EdgeKind::mitigates}));
  CHECK(g->has_edge({"artifact:model-card", "requirement:req-trigger", EdgeKind::evidences}));
  CHECK(g->has_edge({"artifact:model-card", "decision:dec-celeba", EdgeKind::evidences}));
  CHECK(g->node("artifact:audit-summary") == nullptr);
  CHECK(check_graph(*g).empty());
}

TEST_CASE("principles-only repository gives isolated principle nodes") {
  const auto cs = fixtures::smile_booth();
  auto repo = AuditRepository::from_documents(cs.manifest, {cs.scoping.front()});
  REQUIRE(repo.ok());
  auto g = build_graph(*repo);
  REQUIRE(g.ok());
  CHECK(g->edges.empty());
  int principles = 0;
  for (const auto& n : g->nodes) principles += n.kind == NodeKind::principle;
  CHECK(principles == 5);
  CHECK(g->nodes.size() == 6);  // plus the declaration's own artifact node
}

TEST_CASE("node and edge counts match an independent recount") {
  for (const auto& cs : {fixtures::smile_booth(), fixtures::child_abuse()}) {
    const auto docs = fixtures::completed(cs);
    std::size_t nodes = 0, edges = 0;
    for (const auto& d : docs) {
      if (d.kind() == ArtifactKind::AuditSummaryReport) continue;
      nodes += 1;
      edges += d.evidences.size() + (d.meta.supersedes ? 1 : 0);
      if (auto* p = d.as<PrinciplesDeclaration>()) nodes += p->principles.size();
      if (auto* p = d.as<ProductRequirementsDoc>()) {
        for (const auto& r : p->requirements) nodes += 1, edges += r.principles.size();
      }
      if (auto* p = d.as<DesignHistoryReview>()) nodes += p->decisions.size();
      if (auto* p = d.as<FmeaRegister>()) {
        for (const auto& e : p->entries) nodes += 1, edges += e.threatened_principles.size();
      }
      if (auto* p = d.as<AdversarialTestingReport>()) nodes += p->test_cases.size(), edges += p->test_cases.size();
      if (auto* p = d.as<RemediationPlan>()) nodes += p->items.size(), edges += p->items.size();
    }
    auto repo = AuditRepository::from_documents(cs.manifest, docs);
    auto g = build_graph(*repo);
    REQUIRE(g.ok());
    CHECK(g->nodes.size() == nodes);
    CHECK(g->edges.size() == edges);
  }
}

TEST_CASE("fully covered toy graph has no gaps") {
  const auto g = make_graph(toy_nodes(), {kThreatens, kExercises, kMitigates});
  CHECK(check_graph(g).empty());
  CHECK(find_gaps(g, toy_register()).empty());
}

TEST_CASE("every subset of toy edges yields exactly the predicted gaps") {
  for (unsigned mask = 0; mask < 8; ++mask) {
    std::vector<TraceEdge> edges;
    if (mask & 1) edges.push_back(kThreatens);
    if (mask & 2) edges.push_back(kExercises);
    if (mask & 4) edges.push_back(kMitigates);
    const auto g = make_graph(toy_nodes(), edges);
    CAPTURE(mask);
    CHECK(code_paths(find_gaps(g, toy_register())) == toy_oracle(mask & 1, mask & 2, mask & 4));
  }
}

TEST_CASE("mitigations that are not planned or verified do not count") {
  for (const char* status : {"infeasible", "under_inquiry"}) {
    auto nodes = toy_nodes();
    for (auto& n : nodes) {
      if (n.kind == NodeKind::mitigation) n.attrs["status"] = status;
    }
    const auto g = make_graph(nodes, {kThreatens, kExercises, kMitigates});
    CHECK(code_paths(find_gaps(g, toy_register())) == toy_oracle(true, true, false));
  }
}

TEST_CASE("adding edges never adds gaps") {
  Gen g(8);
  for (int round = 0; round < 300; ++round) {
    std::vector<TraceNode> nodes;
    RiskRegister reg;
    const int np = g.integer(1, 3), nr = g.integer(1, 3), nt = g.integer(0, 3), nm = g.integer(0, 3), nq = g.integer(0, 2);
    for (int i = 0; i < np; ++i) nodes.push_back(node(NodeKind::principle, "p" + std::to_string(i)));
    for (int i = 0; i < nr; ++i) {
      nodes.push_back(node(NodeKind::risk, "r" + std::to_string(i)));
      FmeaEntry e;
      e.id = "r" + std::to_string(i);
      e.severity = g.integer(1, 5);
      e.likelihood = g.integer(1, 5);
      e.status = static_cast<FmeaStatus>(g.integer(0, 2));
      reg.entries.push_back(e);
    }
    for (int i = 0; i < nt; ++i)
      nodes.push_back(node(NodeKind::test_case, "t" + std::to_string(i), {{"failures", std::to_string(g.integer(0, 2))}}));
    for (int i = 0; i < nm; ++i)
      nodes.push_back(node(NodeKind::mitigation, "m" + std::to_string(i),
                           {{"status", std::string(to_string(static_cast<MitigationStatus>(g.integer(0, 3))))}}));
    for (int i = 0; i < nq; ++i) nodes.push_back(node(NodeKind::requirement, "q" + std::to_string(i)));
    nodes.push_back(node(NodeKind::artifact, "a"));

    // Every allowed edge between these nodes.
    std::vector<TraceEdge> candidates;
    for (const auto& a : nodes) {
      for (const auto& b : nodes) {
        for (EdgeKind k : {EdgeKind::threatens, EdgeKind::derives_from, EdgeKind::exercises, EdgeKind::mitigates,
                           EdgeKind::evidences}) {
          if (edge_allowed(k, a.kind, b.kind)) candidates.push_back({a.id, b.id, k});
        }
      }
    }
    std::vector<TraceEdge> edges;
    for (const auto& e : candidates) {
      if (g.coin(0.4)) edges.push_back(e);
    }
    const auto base = make_graph(nodes, edges);
    REQUIRE(check_graph(base).empty());
    const auto before = code_paths(find_gaps(base, reg));
    const auto& extra = candidates[static_cast<std::size_t>(g.integer(0, static_cast<int>(candidates.size()) - 1))];
    edges.push_back(extra);
    auto grown = make_graph(nodes, edges);
    grown.edges.erase(std::unique(grown.edges.begin(), grown.edges.end()), grown.edges.end());
    const auto after = code_paths(find_gaps(grown, reg));
    CHECK(std::includes(before.begin(), before.end(), after.begin(), after.end()));
  }
}

TEST_CASE("child screening false negative is flagged as an unmitigated failure") {
  const auto cs = fixtures::child_abuse();
  for (bool with_plan : {false, true}) {
    auto docs = fixtures::completed(cs, false);
    if (!with_plan) docs = without(docs, cs.plan_id);
    auto repo = AuditRepository::from_documents(cs.manifest, docs);
    auto g = build_graph(*repo);
    REQUIRE(g.ok());
    const auto gaps = code_paths(find_gaps(*g, *repo->risk_register()));
    CAPTURE(with_plan);
    CHECK(gaps.count({"W_UNMITIGATED_FAILURE", "test:tc-profiles-fn"}) == 1);
    CHECK(gaps.count({"W_UNMITIGATED_FAILURE", "test:tc-profiles-fp"}) == !with_plan);
  }
}

TEST_CASE("orphan requirements are errors") {
  const auto cs = fixtures::smile_booth();
  auto docs = fixtures::completed(cs, false);
  for (auto& d : docs) {
    if (d.meta.id == "datasheet") d.evidences.clear();
  }
  auto repo = AuditRepository::from_documents(cs.manifest, docs);
  auto g = build_graph(*repo);
  REQUIRE(g.ok());
  CHECK(code_paths(find_gaps(*g, *repo->risk_register())).count({"E_ORPHAN_REQUIREMENT", "requirement:req-inclusive"}));
}

TEST_CASE("dangling references, bad signatures and supersedes cycles") {
  auto g = make_graph({node(NodeKind::artifact, "a"), node(NodeKind::artifact, "b"), node(NodeKind::artifact, "c"),
                       node(NodeKind::principle, "p")},
                      {{"artifact:a", "artifact:b", EdgeKind::supersedes},
                       {"artifact:b", "artifact:c", EdgeKind::supersedes},
                       {"artifact:c", "artifact:a", EdgeKind::supersedes},
                       {"artifact:a", "principle:p", EdgeKind::threatens},
                       {"artifact:a", "risk:none", EdgeKind::mitigates}});
  const auto d = check_graph(g);
  std::map<std::string, int> count;
  for (const auto& x : d) ++count[x.code];
  CHECK(count["E_SUPERSEDES_CYCLE"] == 1);
  CHECK(count["E_DANGLING_REF"] == 1);
  CHECK(count["E_BAD_VALUE"] == 1);
  CHECK(d.size() == 3);
}

TEST_CASE("repository cross-references must resolve") {
  const auto cs = fixtures::smile_booth();
  auto docs = fixtures::completed(cs, false);
  for (auto& d : docs) {
    if (d.meta.id == "model-card") d.meta.supersedes = "model-card-old";
  }
  auto repo = AuditRepository::from_documents(cs.manifest, docs);
  auto g = build_graph(*repo);
  REQUIRE_FALSE(g.ok());
  CHECK(g.diagnostics().front().code == "E_DANGLING_REF");

  docs = fixtures::completed(cs, false);
  for (auto& d : docs) {
    if (d.meta.id == "model-card") d.meta.supersedes = "datasheet";
    if (d.meta.id == "datasheet") d.meta.supersedes = "model-card";
  }
  repo = AuditRepository::from_documents(cs.manifest, docs);
  g = build_graph(*repo);
  REQUIRE_FALSE(g.ok());
  CHECK(g.diagnostics().size() == 1);
  CHECK(g.diagnostics().front().code == "E_SUPERSEDES_CYCLE");
}

TEST_CASE("graph hash ignores the generation time") {
  const auto cs = fixtures::smile_booth();
  auto repo = fixtures::completed_repository(cs);
  auto a = build_graph(*repo, "2026-01-01T00:00:00Z");
  auto b = build_graph(*repo, "2027-06-01T00:00:00Z");
  CHECK(graph_hash(*a) == graph_hash(*b));
  CHECK(serialize_graph(*a) != serialize_graph(*b));
  CHECK(serialize_graph(*a) == serialize_graph(*build_graph(*repo, "2026-01-01T00:00:00Z")));
  CHECK(serialize_graph(*a).rfind("adhf\t1\ngenerated_at\t2026-01-01T00:00:00Z\ngraph_hash\t", 0) == 0);
}

TEST_CASE("empty repository has an empty trail") {
  auto repo = AuditRepository::from_documents(Manifest{}, {});
  auto t = reconstruct_trail(*repo);
  REQUIRE(t.ok());
  CHECK(t->empty());
}

TEST_CASE("session trail interleaves four gates with artifact events and replays the state") {
  TempDir dir;
  auto repo = fixtures::run_session(dir.path(), fixtures::smile_booth());
  REQUIRE_MESSAGE(repo.ok(), format_text(repo.diagnostics()));
  CHECK(repo->state.current_stage == Stage::Reflection);
  auto trail = reconstruct_trail(*repo);
  REQUIRE_MESSAGE(trail.ok(), format_text(trail.diagnostics()));
  std::vector<std::string> gates;
  std::size_t artifact_events = 0;
  for (const auto& ev : *trail) {
    if (ev.gate) {
      gates.push_back(ev.subject);
      CHECK(ev.event == "gate_passed");
      CHECK(ev.gate->history_length == artifact_events);
    } else {
      ++artifact_events;
    }
  }
  CHECK(gates == std::vector<std::string>{"Mapping", "ArtifactCollection", "Testing", "Reflection"});
  CHECK(artifact_events == repo->history.size());
  CHECK(std::is_sorted(trail->begin(), trail->end(),
                       [](const TrailEvent& a, const TrailEvent& b) { return a.timestamp < b.timestamp; }));
  CHECK(replay_state(*trail) == repo->state);
  CHECK(format_trail(*trail) == format_trail(*reconstruct_trail(*load_repository(dir.path()))));
}

TEST_CASE("body edits without a version bump break the trail in every case") {
  TempDir dir;
  REQUIRE(fixtures::run_session(dir.path(), fixtures::smile_booth()).ok());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir.path() / "artifacts")) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  REQUIRE(files.size() >= 15);

  Gen g(50);
  int detected = 0;
  const int kMutations = 50;
  for (int i = 0; i < kMutations; ++i) {
    const auto& file = files[static_cast<std::size_t>(g.integer(0, static_cast<int>(files.size()) - 1))];
    const std::string original = read_file(file);
    json doc = json::parse(original);
    std::vector<json*> leaves;
    std::function<void(json&)> walk = [&](json& j) {
      if (j.is_string() || j.is_number()) leaves.push_back(&j);
      if (j.is_structured()) for (auto& v : j) walk(v);
    };
    walk(doc["body"]);
    REQUIRE_FALSE(leaves.empty());
    json& leaf = *leaves[static_cast<std::size_t>(g.integer(0, static_cast<int>(leaves.size()) - 1))];
    if (leaf.is_string()) {
      leaf = leaf.get<std::string>() + " (edited " + std::to_string(i) + ")";
    } else if (leaf.is_number_integer()) {
      leaf = leaf.get<long long>() + 1;
    } else {
      leaf = leaf.get<double>() + 0.5;
    }
    // Half the edits also rewrite the stored hash so the file still parses.
    if (i % 2 == 0) doc["meta"]["content_hash"] = hash_artifact(canonical_bytes(doc["body"]));
    REQUIRE(write_file(file, doc.dump(2)));

    auto repo = load_repository(dir.path());
    REQUIRE(repo.ok());
    auto trail = reconstruct_trail(*repo);
    const bool gap = !trail.ok() && std::any_of(trail.diagnostics().begin(), trail.diagnostics().end(),
                                                [](const Diagnostic& d) { return d.code == "E_HISTORY_GAP"; });
    CAPTURE(file.string());
    CHECK(gap);
    detected += gap;
    REQUIRE(write_file(file, original));
  }
  CHECK(detected == kMutations);
  CHECK(reconstruct_trail(*load_repository(dir.path())).ok());
}

TEST_CASE("gate inputs must match the history they claim") {
  TempDir dir;
  auto repo = fixtures::run_session(dir.path(), fixtures::smile_booth());
  REQUIRE(repo.ok());
  auto r = repo.value();
  r.state.gate_log[1].history_length -= 1;
  auto t = reconstruct_trail(r);
  REQUIRE_FALSE(t.ok());
  CHECK(t.diagnostics().front().code == "E_HISTORY_GAP");

  r = repo.value();
  r.state.gate_log[0].history_length = r.history.size() + 1;
  CHECK_FALSE(reconstruct_trail(r).ok());

  r = repo.value();
  r.history.erase(r.history.begin() + 2);
  CHECK_FALSE(reconstruct_trail(r).ok());
}
