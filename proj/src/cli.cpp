#include "smactr/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <sstream>

#include "smactr/clock.hpp"
#include "smactr/report.hpp"
#include "smactr/repository.hpp"
#include "smactr/risk.hpp"
#include "smactr/trace.hpp"
#include "smactr/workflow.hpp"

namespace smactr {

namespace {

struct Globals {
  std::string repo = ".";
  std::string format = "text";
};

class Command {
 public:
  Command(const Globals& g, std::ostream& out, std::ostream& err) : g_(g), out_(out), err_(err), root_(g.repo) {}

  bool machine() const { return g_.format == "machine"; }

  void print(const Diagnostics& diags) {
    Diagnostics sorted = diags;
    sort_diagnostics(sorted);
    out_ << (machine() ? format_machine(sorted) : format_text(sorted));
  }

  int fail(const Diagnostics& diags, int code = kExitFailed) {
    print(diags);
    return code;
  }

  Result<AuditRepository> load() { return load_repository(root_); }

  // Takes the writer lock and brings history up to date with the files.
  Result<WriterLock> lock_and_record(const std::string& timestamp, Diagnostics& notes) {
    auto lock = WriterLock::acquire(root_);
    if (!lock) return lock.diagnostics();
    RecordOutcome rec = record_artifacts(root_, timestamp);
    append(notes, rec.diagnostics);
    if (has_errors(rec.diagnostics)) return rec.diagnostics;
    if (!machine()) {
      for (const auto& r : rec.records) out_ << "recorded " << r.artifact_id << " v" << r.version << " (" << r.event << ")\n";
    }
    return lock;
  }

  const Globals& g_;
  std::ostream& out_;
  std::ostream& err_;
  fs::path root_;
};

bool has_parse_failure(const AuditRepository& repo) {
  if (!repo.unreadable_files.empty()) return true;
  return std::any_of(repo.load_diagnostics.begin(), repo.load_diagnostics.end(),
                     [](const Diagnostic& d) { return d.code == "E_PARSE"; });
}

// --- init ---------------------------------------------------------------

int cmd_init(Command& c, const std::string& profile_name, const std::string& audit_id, const std::string& product) {
  InitOptions options;
  options.profile = *parse_profile(profile_name);
  options.audit_id = audit_id;
  options.product = product;
  options.timestamp = now_timestamp();
  auto repo = init_repository(c.root_, options);
  if (!repo) return c.fail(repo.diagnostics());
  if (!c.machine()) {
    c.out_ << "initialized " << c.root_.string() << " (profile " << to_string(options.profile) << ", "
           << repo->artifacts.size() << " template artifacts)\n";
  }
  return kExitOk;
}

// --- validate -----------------------------------------------------------

int cmd_validate(Command& c, bool record) {
  Diagnostics notes;
  std::optional<WriterLock> lock;
  if (record) {
    auto l = c.lock_and_record(now_timestamp(), notes);
    if (!l) return c.fail(l.diagnostics());
    lock.emplace(std::move(l).value());
  }
  auto repo = c.load();
  if (!repo) {
    const auto& d = repo.diagnostics();
    const bool parse = std::any_of(d.begin(), d.end(), [](const Diagnostic& x) { return x.code == "E_PARSE"; });
    return c.fail(d, parse ? kExitParseFailure : kExitFailed);
  }
  Diagnostics all = repo->all_diagnostics();
  append(all, notes);
  c.print(all);
  if (!c.machine()) {
    c.out_ << repo->artifacts.size() << " artifacts, " << count_severity(all, Severity::error) << " errors, "
           << count_severity(all, Severity::warning) << " warnings\n";
  }
  if (has_parse_failure(*repo)) return kExitParseFailure;
  return has_errors(all) ? kExitFailed : kExitOk;
}

// --- status -------------------------------------------------------------

int cmd_status(Command& c) {
  auto repo = c.load();
  if (!repo) return c.fail(repo.diagnostics());
  const Stage current = repo->state.current_stage;
  const auto& current_reqs = repo->requirements.at(current);
  int final_count = 0;
  for (const auto& req : current_reqs) {
    const auto arts = repo->of_kind(req.kind);
    if (std::any_of(arts.begin(), arts.end(),
                    [](const LoadedArtifact* a) { return a->doc.meta.status == ArtifactStatus::final; })) {
      ++final_count;
    }
  }
  const char sep = '\t';
  if (c.machine()) {
    c.out_ << "stage" << sep << to_string(current) << sep << final_count << sep << current_reqs.size() << '\n';
  } else {
    c.out_ << to_string(current) << " (" << final_count << "/" << current_reqs.size() << " artifacts final)\n";
  }
  for (const auto& [stage, reqs] : repo->requirements) {
    if (!c.machine()) c.out_ << "\n" << to_string(stage) << (stage == current ? "  <- current" : "") << "\n";
    for (const auto& req : reqs) {
      const LoadedArtifact* a = repo->primary(req.kind);
      std::ostringstream row;
      row << to_string(stage) << sep << to_string(req.kind) << sep << to_string(req.producer) << sep
          << to_string(req.min_status) << sep;
      if (a) {
        row << a->doc.meta.id << sep << "v" << a->doc.meta.version << sep << to_string(a->doc.meta.status) << sep
            << (a->valid() ? "valid" : "invalid");
      } else {
        row << "-" << sep << "-" << sep << "missing" << sep << "-";
      }
      c.out_ << (c.machine() ? "" : "  ") << row.str() << '\n';
    }
  }
  if (!repo->load_diagnostics.empty() && !c.machine()) {
    c.out_ << "\n" << repo->load_diagnostics.size() << " repository problem(s); run validate\n";
  }
  return kExitOk;
}

// --- gate ---------------------------------------------------------------

int cmd_gate(Command& c, const std::string& stage_name, bool advance, bool waive) {
  const auto target = parse_stage(stage_name);
  if (!target) {
    c.err_ << "unknown stage '" << stage_name << "'\n";
    return kExitUsage;
  }
  GateOptions options;
  options.waive_checklist = waive;
  if (!advance) {
    auto repo = c.load();
    if (!repo) return c.fail(repo.diagnostics());
    GateResult gate = check_gate(*repo, *target, options);
    c.print(gate.diagnostics);
    if (!c.machine()) c.out_ << "gate " << to_string(*target) << ": " << (gate.pass ? "pass" : "fail") << "\n";
    return gate.pass ? kExitOk : kExitFailed;
  }
  const std::string ts = now_timestamp();
  Diagnostics notes;
  auto lock = c.lock_and_record(ts, notes);
  if (!lock) return c.fail(lock.diagnostics());
  auto repo = c.load();
  if (!repo) return c.fail(repo.diagnostics());
  auto state = advance_stage(*repo, *target, ts, options);
  if (!state) {
    c.print(state.diagnostics());
    if (!c.machine()) c.out_ << "gate " << to_string(*target) << ": fail\n";
    return kExitFailed;
  }
  if (auto saved = save_state(c.root_, state.value()); !saved) return c.fail(saved.diagnostics());
  GateResult gate = check_gate(*repo, *target, options);
  c.print(gate.diagnostics);
  if (!c.machine()) c.out_ << "gate " << to_string(*target) << ": pass, advanced to " << to_string(*target) << "\n";
  return kExitOk;
}

// --- risk ---------------------------------------------------------------

ArtifactDocument next_version(const ArtifactDocument& doc, ArtifactBody body, const std::string& ts) {
  ArtifactDocument out = doc;
  out.body = std::move(body);
  out.meta.version = doc.meta.version + 1;
  out.meta.created_at = ts;
  return out;
}

int cmd_risk(Command& c, const std::string& ingest_id, bool write_chart) {
  const std::string ts = now_timestamp();
  std::optional<WriterLock> lock;
  if (!ingest_id.empty() || write_chart) {
    Diagnostics notes;
    auto l = c.lock_and_record(ts, notes);
    if (!l) return c.fail(l.diagnostics());
    lock.emplace(std::move(l).value());
  }
  auto repo = c.load();
  if (!repo) return c.fail(repo.diagnostics());
  const LoadedArtifact* fmea = repo->primary(ArtifactKind::Fmea);
  if (!fmea) return c.fail({make_diag("E_GATE_MISSING", "Fmea", "", "no FMEA register in the repository")});
  const RiskMatrix matrix = repo->manifest.matrix();
  RiskRegister reg = *fmea->doc.as<FmeaRegister>();
  std::vector<HistoryRecord> history = repo->history;

  if (!ingest_id.empty()) {
    const LoadedArtifact* atr = repo->find(ingest_id);
    if (!atr || atr->doc.kind() != ArtifactKind::AdversarialTestingReport) {
      return c.fail({make_diag("E_BAD_VALUE", ingest_id, "", "not an adversarial testing report in this repository")});
    }
    if (!atr->valid()) return c.fail(atr->diagnostics);
    auto ingested = update_fmea_with_tests(reg, *atr->doc.as<AdversarialTestingReport>(), ingest_id, matrix);
    if (!ingested) return c.fail(ingested.diagnostics());
    if (!(ingested->updated == reg)) {
      auto rec = write_artifact(c.root_, next_version(fmea->doc, ingested->updated, ts), history, ts);
      if (!rec) return c.fail(rec.diagnostics());
      history.push_back(rec.value());
      reg = ingested->updated;
    }
    if (c.machine()) {
      for (const auto& d : ingested->deltas) {
        c.out_ << "delta\t" << d.fmea_id << '\t' << (d.old_class ? to_string(*d.old_class) : "-") << '\t'
               << (d.new_class ? to_string(*d.new_class) : "-") << '\n';
      }
    } else {
      c.out_ << "ingested " << ingest_id << ":\n" << format_deltas(ingested->deltas);
    }
  }

  if (write_chart) {
    EthicalRiskChart chart = generate_chart(reg, matrix);
    const LoadedArtifact* existing = repo->primary(ArtifactKind::EthicalRiskChart);
    if (existing) {
      // Keep rationales written by hand for rows that are still present.
      for (auto& row : chart.rows) {
        for (const auto& old : existing->doc.as<EthicalRiskChart>()->rows) {
          if (old.fmea_id == row.fmea_id) row.rationale = old.rationale;
        }
      }
    }
    if (!existing || !(*existing->doc.as<EthicalRiskChart>() == chart) ||
        existing->doc.meta.status != ArtifactStatus::final) {
      ArtifactDocument doc;
      if (existing) {
        doc = next_version(existing->doc, chart, ts);
      } else {
        doc.meta.id = "risk-chart";
        doc.meta.stage = repo->context.stage_of.at(ArtifactKind::EthicalRiskChart);
        doc.meta.producer = repo->manifest.producer_for(ArtifactKind::EthicalRiskChart);
        doc.meta.created_at = ts;
        doc.body = chart;
      }
      doc.meta.status = ArtifactStatus::final;
      auto rec = write_artifact(c.root_, doc, history, ts);
      if (!rec) return c.fail(rec.diagnostics());
      history.push_back(rec.value());
      if (!c.machine()) c.out_ << "wrote " << doc.meta.id << " v" << doc.meta.version << " (" << chart.rows.size() << " rows)\n";
    }
  }

  auto prioritized = prioritize_risks(reg, matrix);
  if (!prioritized) return c.fail(prioritized.diagnostics());
  int rank = 0;
  if (!c.machine()) c.out_ << "rank\tid\tclass\tS\tL\tstatus\tprinciples\tfailure_mode\n";
  for (const auto& e : prioritized.value()) {
    std::string principles;
    for (const auto& p : e.threatened_principles) principles += (principles.empty() ? "" : ",") + p;
    c.out_ << ++rank << '\t' << e.id << '\t' << to_string(*entry_class(e, matrix)) << '\t' << *e.severity << '\t'
           << *e.likelihood << '\t' << to_string(e.status) << '\t' << principles << '\t' << e.failure_mode << '\n';
  }
  return kExitOk;
}

// --- trace --------------------------------------------------------------

int cmd_trace(Command& c) {
  auto repo = c.load();
  if (!repo) return c.fail(repo.diagnostics());
  auto graph = build_graph(*repo, now_timestamp());
  if (!graph) return c.fail(graph.diagnostics());
  if (!write_file(c.root_ / kGraphFile, serialize_graph(*graph))) {
    return c.fail({make_diag("E_IO", "", "", "cannot write " + std::string(kGraphFile))});
  }
  auto trail = reconstruct_trail(*repo);
  if (!trail) return c.fail(trail.diagnostics());
  c.out_ << format_trail(trail.value());
  if (!c.machine()) {
    const RiskRegister reg = repo->risk_register().value_or(RiskRegister{});
    const Diagnostics gaps = find_gaps(*graph, reg, repo->manifest.matrix());
    c.out_ << "\n" << kGraphFile << ": " << graph->nodes.size() << " nodes, " << graph->edges.size()
           << " edges, hash " << graph_hash(*graph) << "\n";
    c.print(gaps);
  }
  return kExitOk;
}

// --- report -------------------------------------------------------------

int cmd_report(Command& c, bool write_artifact_flag) {
  const std::string ts = now_timestamp();
  std::optional<WriterLock> lock;
  if (write_artifact_flag) {
    Diagnostics notes;
    auto l = c.lock_and_record(ts, notes);
    if (!l) return c.fail(l.diagnostics());
    lock.emplace(std::move(l).value());
  }
  auto repo = c.load();
  if (!repo) return c.fail(repo.diagnostics());
  auto report = compile_report(*repo);
  if (!report) return c.fail(report.diagnostics());

  const LoadedArtifact* existing = repo->primary(ArtifactKind::AuditSummaryReport);
  ArtifactDocument doc = report_artifact(*report, existing ? existing->doc.meta.id : "audit-summary",
                                         existing ? existing->doc.meta.version : 1,
                                         existing ? existing->doc.meta.created_at : ts);
  doc.meta.producer = repo->manifest.producer_for(ArtifactKind::AuditSummaryReport);
  doc.meta.stage = repo->context.stage_of.at(ArtifactKind::AuditSummaryReport);
  const bool changed = !existing || !(existing->doc.body == doc.body) || !(existing->doc.meta.producer == doc.meta.producer);
  if (existing && changed) {
    doc.meta.version = existing->doc.meta.version + 1;
    doc.meta.created_at = ts;
  }
  seal(doc);

  const std::string text = render_report(*report);
  if (!write_file(c.root_ / kReportFile, text)) {
    return c.fail({make_diag("E_IO", "", "", "cannot write " + std::string(kReportFile))});
  }
  if (write_artifact_flag && changed) {
    auto rec = write_artifact(c.root_, doc, repo->history, ts);
    if (!rec) return c.fail(rec.diagnostics());
  }
  c.out_ << (c.machine() ? serialize_artifact(doc) : text);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Algorithmic audit repository: artifacts, stage gates, risk register, trace and report", "smactr"};
  Globals g;
  app.add_option("--repo", g.repo, "Audit repository root")->capture_default_str();
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "machine"}))->capture_default_str();
  app.require_subcommand(1);

  std::string profile = "full", audit_id = "audit", product = "unnamed product";
  auto* init = app.add_subcommand("init", "Create an audit repository with Scoping templates");
  init->add_option("--profile", profile, "Requirement profile")->check(CLI::IsMember({"full", "light"}))->capture_default_str();
  init->add_option("--audit-id", audit_id, "Audit identifier")->capture_default_str();
  init->add_option("--product", product, "Audited product name")->capture_default_str();

  bool record = false;
  auto* validate = app.add_subcommand("validate", "Validate every artifact");
  validate->add_flag("--record", record, "Seal and record new artifact versions first");

  auto* status = app.add_subcommand("status", "Show the current stage and required artifacts");

  std::string stage;
  bool advance = false, waive = false;
  auto* gate = app.add_subcommand("gate", "Check the gate into a stage");
  gate->add_option("stage", stage, "Target stage")->required();
  gate->add_flag("--advance", advance, "Move to the stage if the gate passes");
  gate->add_flag("--waive-checklist", waive, "Accept an incomplete design checklist (recorded in the gate log)");

  std::string ingest;
  bool write_chart = false;
  auto* risk = app.add_subcommand("risk", "Print the prioritized risk register");
  risk->add_option("--ingest-tests", ingest, "Re-estimate likelihoods from an adversarial testing report");
  risk->add_flag("--write-chart", write_chart, "Write the ethical risk chart from the register");

  auto* trace = app.add_subcommand("trace", "Write adhf.graph and print the audit trail");

  bool write_artifact_flag = false;
  auto* report = app.add_subcommand("report", "Write audit_report.txt");
  report->add_flag("--write-artifact", write_artifact_flag, "Also store the report as an artifact");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Command c(g, out, err);
  try {
    if (init->parsed()) return cmd_init(c, profile, audit_id, product);
    if (validate->parsed()) return cmd_validate(c, record);
    if (status->parsed()) return cmd_status(c);
    if (gate->parsed()) return cmd_gate(c, stage, advance, waive);
    if (risk->parsed()) return cmd_risk(c, ingest, write_chart);
    if (trace->parsed()) return cmd_trace(c);
    if (report->parsed()) return cmd_report(c, write_artifact_flag);
  } catch (const fs::filesystem_error& e) {
    return c.fail({make_diag("E_IO", "", "", e.what())});
  }
  return kExitUsage;
}

}  // namespace smactr
