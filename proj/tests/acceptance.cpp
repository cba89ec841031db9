#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "generators.hpp"
#include "smactr/checklist.hpp"
#include "smactr/clock.hpp"
#include "smactr/report.hpp"
#include "smactr/repository.hpp"
#include "smactr/risk.hpp"
#include "smactr/trace.hpp"
#include "smactr/workflow.hpp"
#include "test_util.hpp"

using namespace smactr;
using smactr::testing::Gen;
using smactr::testing::run_in;
using smactr::testing::ScopedEnv;
using smactr::testing::TempDir;

namespace {

// Each criterion returns an empty string on success, otherwise why it failed.
using Criterion = std::function<std::string()>;

std::string fail_unless(bool ok, const std::string& why) { return ok ? "" : why; }

std::filesystem::path file_of(const std::filesystem::path& root, const std::string& id) {
  for (const auto& e : std::filesystem::recursive_directory_iterator(root / "artifacts")) {
    if (e.path().stem() == id) return e.path();
  }
  return {};
}

std::vector<ArtifactDocument> edit_plan(std::vector<ArtifactDocument> docs, const std::string& id,
                                        const std::string& item, MitigationStatus status) {
  for (auto& d : docs) {
    if (d.meta.id != id) continue;
    for (auto& i : d.as<RemediationPlan>()->items) {
      if (i.id == item) i.status = status;
    }
    seal(d);
  }
  return docs;
}

Result<SummaryReport> compile(const fixtures::CaseStudy& cs, const std::vector<ArtifactDocument>& docs) {
  auto repo = AuditRepository::from_documents(cs.manifest, docs);
  if (!repo) return repo.diagnostics();
  return compile_report(*repo);
}

// Drives the smile-booth audit through the CLI one stage at a time.
std::string ac1_smile_session() {
  const auto start = std::chrono::steady_clock::now();
  ScopedEnv now(kClockEnv, fixtures::kTimestamp);
  TempDir dir;
  const auto root = dir.path();
  const auto cs = fixtures::smile_booth();
  auto cli = [&](std::vector<std::string> args) { return run_in(root, std::move(args)); };

  if (cli({"init", "--audit-id", cs.manifest.audit_id, "--product", cs.manifest.product}).code != 0) return "init failed";
  const std::vector<std::pair<const std::vector<ArtifactDocument>*, const char*>> stages = {
      {&cs.scoping, "Mapping"}, {&cs.mapping, "ArtifactCollection"}, {&cs.collection, "Testing"}};
  for (const auto& [docs, next] : stages) {
    if (!fixtures::write_documents(root, *docs)) return "writing documents failed";
    auto g = cli({"gate", next, "--advance"});
    if (g.code != 0) return std::string("gate ") + next + " failed:\n" + g.out;
  }
  if (!fixtures::write_documents(root, cs.testing)) return "writing test report failed";
  auto risk = cli({"risk", "--ingest-tests", cs.tests_id, "--write-chart"});
  if (risk.code != 0) return "risk ingestion failed:\n" + risk.out;
  auto g = cli({"gate", "Reflection", "--advance"});
  if (g.code != 0) return "gate Reflection failed:\n" + g.out;
  if (!fixtures::write_documents(root, cs.reflection)) return "writing remediation plan failed";

  const auto fmea = file_of(root, cs.fmea_id);
  json doc = json::parse(read_file(fmea));
  doc["meta"]["status"] = "final";
  doc["meta"]["version"] = doc["meta"]["version"].get<int>() + 1;
  if (!write_file(fmea, doc.dump(2))) return "finalizing the FMEA failed";
  auto rec = cli({"validate", "--record"});
  if (rec.code != 0) return "validate --record failed:\n" + rec.out;

  auto report = cli({"report", "--write-artifact"});
  if (report.code != 0) return "report failed:\n" + report.out;
  auto repo = load_repository(root);
  if (!repo) return "reload failed";
  if (repo->state.current_stage != Stage::Reflection) return "session did not reach Reflection";
  const auto* summary = repo->find("audit-summary");
  if (!summary) return "summary artifact missing";
  const auto& s = *summary->doc.as<AuditSummaryReport>();
  if (s.verdict != Verdict::conditional_greenlight) return "verdict is " + std::string(to_string(s.verdict));
  std::map<std::string, RiskClass> worst;
  for (const auto& f : s.principle_findings) {
    if (!f.unexamined) worst[f.principle] = f.worst_class;
  }
  if (worst["privacy"] != RiskClass::high) return "privacy finding is not high";
  if (worst["justice-fairness"] != RiskClass::high) return "justice finding is not high";
  if (report.out.find("Privacy: high") == std::string::npos ||
      report.out.find("Justice, Fairness & Non-Discrimination: high") == std::string::npos) {
    return "rendered findings missing";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return fail_unless(secs < 5.0, "session took " + std::to_string(secs) + " s");
}

std::string ac2_child_verdicts() {
  const auto cs = fixtures::child_abuse();
  const auto docs = fixtures::completed(cs, false);
  auto stalled = compile(cs, docs);
  if (!stalled) return "report failed: " + format_text(stalled.diagnostics());
  if (stalled->summary.verdict != Verdict::stall) return "expected stall, got " + std::string(to_string(stalled->summary.verdict));
  const auto& reasons = stalled->verdict.reasons;
  if (std::none_of(reasons.begin(), reasons.end(), [](const std::string& r) { return r.rfind("fm-false-negative", 0) == 0; })) {
    return "stall not attributed to the false negative";
  }
  auto cancelled = compile(cs, edit_plan(docs, cs.plan_id, "rp-inquiry", MitigationStatus::infeasible));
  if (!cancelled) return "report failed after flip";
  return fail_unless(cancelled->summary.verdict == Verdict::cancel,
                     "expected cancel, got " + std::string(to_string(cancelled->summary.verdict)));
}

std::string ac3_matrix() {
  // Brute-force oracle computed from the row thresholds before consulting the library.
  const std::vector<std::string> rows = {"LLLLM", "LLMMM", "MMMMH", "MMMHH", "HHHHH"};
  auto oracle = [&](int s, int l) {
    const char c = rows[static_cast<std::size_t>(s - 1)][static_cast<std::size_t>(l - 1)];
    return c == 'L' ? RiskClass::low : c == 'M' ? RiskClass::mid : RiskClass::high;
  };
  int mismatches = 0;
  for (int s = 1; s <= 5; ++s) {
    for (int l = 1; l <= 5; ++l) {
      auto c = classify_risk(s, l);
      if (!c || *c != oracle(s, l)) ++mismatches;
      for (int s2 = s; s2 <= 5; ++s2) {
        for (int l2 = l; l2 <= 5; ++l2) {
          if (*classify_risk(s2, l2) < *classify_risk(s, l)) return "not monotone";
        }
      }
    }
  }
  if (mismatches) return std::to_string(mismatches) + " cells differ from the oracle";
  if (*classify_risk(5, 5) != RiskClass::high || *classify_risk(1, 1) != RiskClass::low) return "corner cells wrong";
  return "";
}

std::string ac4_gate_soundness() {
  for (const auto& cs : {fixtures::smile_booth(), fixtures::child_abuse()}) {
    const auto full = fixtures::completed(cs);
    auto base = AuditRepository::from_documents(cs.manifest, full);
    if (!base) return "fixture repository failed to load";
    const auto stage_of = stage_assignment(base->requirements);
    auto passes = [](const AuditRepository& repo, int k) {
      if (k == 5) return check_completion(repo).pass;
      return check_gate(repo, kAllStages[static_cast<std::size_t>(k)]).pass;
    };
    for (int k = 0; k <= 5; ++k) {
      if (!passes(*base, k)) return "complete repository fails gate " + std::to_string(k);
    }
    for (const auto& victim : full) {
      auto repo = *base;
      repo.remove(victim.meta.id);
      const int owner = stage_index(stage_of.at(victim.kind()));
      for (int k = 0; k <= 5; ++k) {
        if (passes(repo, k) != (k <= owner)) {
          return "deleting " + victim.meta.id + " gave the wrong outcome at gate " + std::to_string(k);
        }
      }
    }
  }
  return "";
}

std::string ac5_datasheet() {
  const auto cs = fixtures::smile_booth();
  const ArtifactDocument* ds = nullptr;
  for (const auto& d : cs.collection) {
    if (d.kind() == ArtifactKind::Datasheet) ds = &d;
  }
  if (!ds) return "no datasheet fixture";
  ValidationContext ctx;
  ctx.fraction_tolerance = 0.02;
  ctx.skew_threshold = 4.0;
  const auto diags = validate_artifact(*ds, ctx);
  const auto& axes = ds->as<Datasheet>()->demographic_breakdown;
  std::string why;
  if (std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.code == "E_DS_FRACTION_SUM"; })) {
    why += "sum check failed";
  }
  const std::map<std::string, bool> expected = {{"gender", false}, {"skin type", true}, {"age", true}};
  for (std::size_t a = 0; a < axes.size(); ++a) {
    const std::string path = "body.demographic_breakdown[" + std::to_string(a) + "].groups";
    const bool fired = std::any_of(diags.begin(), diags.end(),
                                   [&](const Diagnostic& d) { return d.code == "W_DS_SKEW" && d.path == path; });
    const auto it = expected.find(axes[a].axis);
    if (it == expected.end() || fired == it->second) continue;
    double lo = 1, hi = 0;
    for (const auto& g : axes[a].groups) lo = std::min(lo, g.fraction), hi = std::max(hi, g.fraction);
    std::ostringstream os;
    os << (why.empty() ? "" : "; ") << axes[a].axis << " skew " << (fired ? "fired" : "did not fire") << " (max/min = " << hi / lo << ")";
    why += os.str();
  }
  return why;
}

std::string ac6_determinism() {
  ScopedEnv now(kClockEnv, fixtures::kTimestamp);
  TempDir a, b;
  const auto cs = fixtures::smile_booth();
  if (!fixtures::run_session(a / "one", cs) || !fixtures::run_session(b / "two", cs)) return "session failed";
  for (const auto& cmd : std::vector<std::vector<std::string>>{{"validate"}, {"trace"}, {"report"}}) {
    for (const char* format : {"text", "machine"}) {
      std::vector<std::string> args = {"--format", format};
      args.insert(args.end(), cmd.begin(), cmd.end());
      const auto r1 = run_in(a / "one", args), r2 = run_in(a / "one", args), r3 = run_in(b / "two", args);
      if (r1.code != 0) return cmd[0] + " exited " + std::to_string(r1.code);
      if (r1.out != r2.out || r1.out != r3.out) return cmd[0] + " output differs";
    }
  }
  if (read_file(a / "one" / kGraphFile) != read_file(b / "two" / kGraphFile)) return "graph files differ";
  return fail_unless(read_file(a / "one" / kReportFile) == read_file(b / "two" / kReportFile), "report files differ");
}

std::string ac7_round_trip() {
  ValidationContext ctx;
  ctx.principles = fixtures::smile_booth().scoping.front().as<PrinciplesDeclaration>()->principles;
  for (ArtifactKind kind : kAllKinds) {
    Gen g(7000 + static_cast<std::uint64_t>(kind));
    for (int i = 0; i < 1000; ++i) {
      const auto doc = testing::random_document(g, kind);
      const std::string text = serialize_artifact(doc);
      auto parsed = parse_artifact(text, kind);
      if (!parsed) return std::string(to_string(kind)) + " failed to parse: " + format_text(parsed.diagnostics());
      if (!(*parsed == doc) || serialize_artifact(*parsed) != text) return std::string(to_string(kind)) + " changed";
      if (validate_artifact(doc, ctx) != validate_artifact(*parsed, ctx)) {
        return std::string(to_string(kind)) + " validation not deterministic";
      }
    }
  }
  return "";
}

std::string ac8_trail_integrity() {
  ScopedEnv now(kClockEnv, fixtures::kTimestamp);
  TempDir dir;
  if (!fixtures::run_session(dir.path(), fixtures::smile_booth())) return "session failed";
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir / "artifacts")) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  Gen g(8);
  int detected = 0;
  constexpr int kMutations = 50;
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
    json& leaf = *leaves[static_cast<std::size_t>(g.integer(0, static_cast<int>(leaves.size()) - 1))];
    if (leaf.is_string()) {
      leaf = leaf.get<std::string>() + "*";
    } else if (leaf.is_number_integer()) {
      leaf = leaf.get<long long>() + 1;
    } else {
      leaf = leaf.get<double>() + 0.25;
    }
    if (i % 2 == 0) doc["meta"]["content_hash"] = hash_artifact(canonical_bytes(doc["body"]));
    write_file(file, doc.dump(2));
    auto repo = load_repository(dir.path());
    if (repo) {
      auto trail = reconstruct_trail(*repo);
      const auto& d = trail.ok() ? Diagnostics{} : trail.diagnostics();
      detected += std::any_of(d.begin(), d.end(), [](const Diagnostic& x) { return x.code == "E_HISTORY_GAP"; });
    }
    write_file(file, original);
  }
  return fail_unless(detected == kMutations, std::to_string(detected) + "/" + std::to_string(kMutations) + " detected");
}

std::string ac9_lint() {
  const std::vector<std::string> closed = {"Is", "Are", "Does", "Do", "Did", "Can", "Could", "Will", "Would", "Should",
                                           "Has", "Have", "Was", "Were", "is", "DOES", "can", "Had", "could", "WILL"};
  const std::vector<std::string> open = {"Describe", "How", "What", "Which", "Explain", "List", "Who",
                                         "Where", "Why", "Outline", "Summarize", "Identify", "Discuss", "When",
                                         "describe", "HOW", "what", "Isolate", "Candidly describe", "Doing nothing: what"};
  DesignChecklist cl;
  std::set<std::string> expected;
  for (std::size_t i = 0; i < 20; ++i) {
    cl.items.push_back({"c" + std::to_string(i), closed[i] + " the team review subgroup performance?", std::nullopt, "",
                        ChecklistAnswer::yes, ""});
    expected.insert("body.items[" + std::to_string(cl.items.size() - 1) + "].prompt");
    cl.items.push_back({"o" + std::to_string(i), open[i] + " the team's process for subgroup review.", std::nullopt, "",
                        ChecklistAnswer::yes, ""});
  }
  std::set<std::string> flagged;
  for (const auto& d : lint_questions(cl)) {
    if (d.code == "W_CLOSED_QUESTION") flagged.insert(d.path);
  }
  return fail_unless(flagged == expected, std::to_string(flagged.size()) + " flagged, expected the 20 closed prompts");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Criterion>> criteria = {
      {"AC1 smile-booth session reaches a conditional greenlight", ac1_smile_session},
      {"AC2 child screening stalls, then cancels when infeasible", ac2_child_verdicts},
      {"AC3 risk matrix matches brute force and is monotone", ac3_matrix},
      {"AC4 single-artifact deletion fails exactly the predicted gates", ac4_gate_soundness},
      {"AC5 datasheet sum check and skew warnings", ac5_datasheet},
      {"AC6 validate, trace and report are byte-identical", ac6_determinism},
      {"AC7 generated artifacts round-trip and validate deterministically", ac7_round_trip},
      {"AC8 unversioned body edits break the trail", ac8_trail_integrity},
      {"AC9 checklist lint flags exactly the closed prompts", ac9_lint},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    std::string why;
    try {
      why = check();
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    std::cout << (why.empty() ? "PASS " : "FAIL ") << name << (why.empty() ? "" : ": " + why) << "\n";
    failed += !why.empty();
  }
  return failed == 0 ? 0 : 1;
}
