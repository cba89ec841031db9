#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smactr/artifact.hpp"
#include "smactr/risk.hpp"
#include "smactr/workflow.hpp"

namespace smactr {

struct AuditRepository;

enum class NodeKind { principle, requirement, risk, test_case, mitigation, artifact, decision };
enum class EdgeKind { threatens, derives_from, exercises, mitigates, evidences, supersedes };

std::string_view to_string(NodeKind k);
std::string_view to_string(EdgeKind k);
std::optional<NodeKind> parse_node_kind(std::string_view text);
std::optional<EdgeKind> parse_edge_kind(std::string_view text);

/// Node id as stored in the graph: `<kind prefix>:<local id>`.
std::string node_id(NodeKind kind, std::string_view local_id);

struct TraceNode {
  std::string id;
  NodeKind kind = NodeKind::artifact;
  std::string source_artifact;
  std::string created_at;
  std::map<std::string, std::string> attrs;
  bool operator==(const TraceNode&) const = default;
};

struct TraceEdge {
  std::string from;
  std::string to;
  EdgeKind kind = EdgeKind::evidences;
  auto operator<=>(const TraceEdge&) const = default;
};

/// The algorithmic design history file. Nodes sorted by id, edges by
/// (from, to, kind).
struct TraceGraph {
  std::vector<TraceNode> nodes;
  std::vector<TraceEdge> edges;
  std::string generated_at;
  std::string repo_hash;

  const TraceNode* node(std::string_view id) const;
  bool has_edge(const TraceEdge& e) const;
  std::vector<const TraceEdge*> incoming(std::string_view id, EdgeKind kind) const;
  std::vector<const TraceEdge*> outgoing(std::string_view id, EdgeKind kind) const;

  bool operator==(const TraceGraph&) const = default;
};

/// Whether `kind` may connect a `from` node to a `to` node.
bool edge_allowed(EdgeKind kind, NodeKind from, NodeKind to);

/// Referential integrity, endpoint signatures, self-loops and supersedes cycles.
Diagnostics check_graph(const TraceGraph& graph);

/// Digest of every artifact (id, version, content hash), summary reports excluded.
std::string repo_content_hash(const AuditRepository& repo);

/// One node per principle, PRD requirement, FMEA entry, test case, remediation
/// item, design decision and artifact (summary reports excluded); edges from
/// the artifacts' cross-reference fields. E_DANGLING_REF, E_SUPERSEDES_CYCLE.
Result<TraceGraph> build_graph(const AuditRepository& repo, const std::string& generated_at = {});

/// Adjacency-list text written to adhf.graph.
std::string serialize_graph(const TraceGraph& graph);

/// Digest of the serialized graph without its generated_at line.
std::string graph_hash(const TraceGraph& graph);

/// Coverage gaps: W_UNTESTED_RISK, W_UNMITIGATED_FAILURE,
/// W_UNEXAMINED_PRINCIPLE, E_ORPHAN_REQUIREMENT.
Diagnostics find_gaps(const TraceGraph& graph, const RiskRegister& reg,
                      const RiskMatrix& matrix = RiskMatrix::standard());

struct TrailEvent {
  std::string timestamp;
  std::string event;    // created | updated | finalized | gate_passed | gate_failed
  std::string subject;  // artifact id, or the stage a gate leads into
  int version = 0;      // 0 for gate events
  std::string hash;     // content hash, or the gate's inputs hash
  std::optional<GateLogEntry> gate;
  bool operator==(const TrailEvent&) const = default;
};

/// Artifact history and gate log merged into one ordered list. E_HISTORY_GAP
/// when versions are not contiguous, when an artifact's current content is not
/// the last recorded version, or when a gate's inputs do not match history.
Result<std::vector<TrailEvent>> reconstruct_trail(const AuditRepository& repo);

/// Workflow state implied by a trail.
WorkflowState replay_state(const std::vector<TrailEvent>& trail);

/// One tab-separated line per event.
std::string format_trail(const std::vector<TrailEvent>& trail);

}  // namespace smactr
