#include "smactr/risk.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

namespace smactr {

RiskMatrix RiskMatrix::standard() {
  RiskMatrix m;
  for (int s = 1; s <= 5; ++s) {
    for (int l = 1; l <= 5; ++l) {
      const int score = s * l;
      RiskClass c = RiskClass::mid;
      if (score >= 15 || s == 5) {
        c = RiskClass::high;
      } else if (score <= 4 && s <= 2) {
        c = RiskClass::low;
      }
      m.cells[s - 1][l - 1] = c;
    }
  }
  return m;
}

bool RiskMatrix::is_monotone() const {
  for (int s = 0; s < 5; ++s) {
    for (int l = 0; l < 5; ++l) {
      if (s + 1 < 5 && cells[s + 1][l] < cells[s][l]) return false;
      if (l + 1 < 5 && cells[s][l + 1] < cells[s][l]) return false;
    }
  }
  return true;
}

Result<RiskClass> classify_risk(int severity, int likelihood, const RiskMatrix& matrix) {
  if (!in_scale(severity) || !in_scale(likelihood)) {
    return make_diag("E_RANGE", "", "",
                     "severity " + std::to_string(severity) + ", likelihood " +
                         std::to_string(likelihood) + " outside 1..5");
  }
  return matrix.at(severity, likelihood);
}

std::optional<RiskClass> entry_class(const FmeaEntry& entry, const RiskMatrix& matrix) {
  if (!entry.severity || !entry.likelihood) return std::nullopt;
  if (!in_scale(*entry.severity) || !in_scale(*entry.likelihood)) return std::nullopt;
  return matrix.at(*entry.severity, *entry.likelihood);
}

Result<std::vector<FmeaEntry>> prioritize_risks(const RiskRegister& reg, const RiskMatrix& matrix) {
  Diagnostics bad;
  for (const auto& e : reg.entries) {
    if (!entry_class(e, matrix)) {
      bad.push_back(make_diag("E_UNCLASSIFIED", "", e.id, "severity/likelihood missing or out of range"));
    }
  }
  if (!bad.empty()) return bad;

  auto key = [&](const FmeaEntry& e) {
    return std::make_tuple(*entry_class(e, matrix), *e.severity * *e.likelihood, *e.severity);
  };
  std::vector<FmeaEntry> out = reg.entries;
  std::sort(out.begin(), out.end(), [&](const FmeaEntry& a, const FmeaEntry& b) {
    const auto ka = key(a);
    const auto kb = key(b);
    if (ka != kb) return ka > kb;
    return a.id < b.id;
  });
  return out;
}

int likelihood_from_failure_rate(double failure_rate, std::optional<int> prior) {
  if (failure_rate <= 0.0) return std::max(1, prior.value_or(1) - 1);
  if (failure_rate <= 0.01) return 2;
  if (failure_rate <= 0.1) return 3;
  if (failure_rate <= 0.5) return 4;
  return 5;
}

Result<TestIngestion> update_fmea_with_tests(const RiskRegister& reg,
                                             const AdversarialTestingReport& report,
                                             const std::string& report_id, const RiskMatrix& matrix) {
  struct Tally {
    long long trials = 0;
    long long failures = 0;
  };
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < reg.entries.size(); ++i) index.emplace(reg.entries[i].id, i);

  TestIngestion out;
  out.updated = reg;
  std::map<std::string, Tally> tallies;
  std::map<std::string, std::optional<RiskClass>> old_classes;
  Diagnostics errors;

  for (std::size_t i = 0; i < report.test_cases.size(); ++i) {
    const TestCase& tc = report.test_cases[i];
    std::string target = tc.target_fmea;
    if (target == kNewFmeaTarget) {
      if (!tc.new_entry) {
        errors.push_back(make_diag("E_ATR_NEW_ENTRY", report_id, "body.test_cases[" + std::to_string(i) + "]",
                                   "test case '" + tc.id + "' targets new without new_entry"));
        continue;
      }
      target = tc.new_entry->id;
      if (!index.count(target)) {
        FmeaEntry e;
        e.id = target;
        e.failure_mode = tc.new_entry->failure_mode;
        e.effect = tc.new_entry->effect;
        e.cause = tc.new_entry->cause;
        e.severity = tc.new_entry->severity;
        e.status = FmeaStatus::open;
        e.threatened_principles = tc.new_entry->threatened_principles;
        index.emplace(target, out.updated.entries.size());
        out.updated.entries.push_back(std::move(e));
        old_classes.emplace(target, std::nullopt);
      }
    } else if (!index.count(target)) {
      errors.push_back(make_diag("E_UNKNOWN_FMEA_ID", report_id,
                                 "body.test_cases[" + std::to_string(i) + "].target_fmea",
                                 "no failure mode '" + target + "'"));
      continue;
    }
    if (index[target] < reg.entries.size()) {
      old_classes.emplace(target, entry_class(reg.entries[index[target]], matrix));
    }
    auto& t = tallies[target];
    t.trials += tc.trials;
    t.failures += tc.failures;
  }
  if (!errors.empty()) return errors;

  for (const auto& [id, tally] : tallies) {
    FmeaEntry& e = out.updated.entries[index[id]];
    const double rate = tally.trials > 0 ? static_cast<double>(tally.failures) / static_cast<double>(tally.trials) : 0.0;
    e.likelihood = likelihood_from_failure_rate(rate, e.likelihood);
    if (!report_id.empty() &&
        std::find(e.evidence_refs.begin(), e.evidence_refs.end(), report_id) == e.evidence_refs.end()) {
      e.evidence_refs.push_back(report_id);
    }
    out.deltas.push_back({id, old_classes[id], entry_class(e, matrix)});
  }
  return out;
}

std::string format_deltas(const std::vector<RiskDelta>& deltas) {
  std::ostringstream os;
  auto name = [](const std::optional<RiskClass>& c) { return c ? std::string(to_string(*c)) : std::string("-"); };
  for (const auto& d : deltas) os << d.fmea_id << ' ' << name(d.old_class) << "→" << name(d.new_class) << '\n';
  return os.str();
}

std::map<std::string, PrincipleThreat> assess_principle_threats(const RiskRegister& reg,
                                                                const std::vector<Principle>& principles,
                                                                const RiskMatrix& matrix) {
  std::map<std::string, PrincipleThreat> out;
  for (const auto& p : principles) out[p.id] = PrincipleThreat{};
  for (const auto& e : reg.entries) {
    for (const auto& pid : e.threatened_principles) {
      auto it = out.find(pid);
      if (it == out.end()) continue;
      it->second.unexamined = false;
      if (e.status != FmeaStatus::open) continue;
      const auto cls = entry_class(e, matrix);
      if (!cls) continue;
      it->second.worst = std::max(it->second.worst, *cls);
      it->second.fmea_ids.push_back(e.id);
    }
  }
  for (auto& [id, threat] : out) {
    std::sort(threat.fmea_ids.begin(), threat.fmea_ids.end());
    threat.fmea_ids.erase(std::unique(threat.fmea_ids.begin(), threat.fmea_ids.end()), threat.fmea_ids.end());
  }
  return out;
}

EthicalRiskChart generate_chart(const RiskRegister& reg, const RiskMatrix& matrix) {
  EthicalRiskChart chart;
  for (const auto& e : reg.entries) {
    if (e.status != FmeaStatus::open) continue;
    const auto cls = entry_class(e, matrix);
    if (!cls) continue;
    chart.rows.push_back({e.id, *e.severity, *e.likelihood, *cls, e.rationale});
  }
  std::sort(chart.rows.begin(), chart.rows.end(),
            [](const ChartRow& a, const ChartRow& b) { return a.fmea_id < b.fmea_id; });
  return chart;
}

Diagnostics check_chart_consistency(const EthicalRiskChart& chart, const std::string& chart_id,
                                    const RiskRegister& reg, const RiskMatrix& matrix) {
  Diagnostics out;
  std::map<std::string, const ChartRow*> rows;
  for (const auto& r : chart.rows) rows.emplace(r.fmea_id, &r);
  for (const auto& e : reg.entries) {
    if (e.status != FmeaStatus::open) continue;
    auto it = rows.find(e.id);
    if (it == rows.end()) {
      out.push_back(make_diag("E_ERC_MISSING_ROW", chart_id, "body.rows", "no row for open failure mode '" + e.id + "'"));
      continue;
    }
    const ChartRow& r = *it->second;
    const auto cls = entry_class(e, matrix);
    if (e.severity != r.severity || e.likelihood != r.likelihood || cls != r.risk_class) {
      out.push_back(make_diag("E_ERC_STALE", chart_id, "body.rows",
                              "row for '" + e.id + "' does not match the register"));
    }
  }
  sort_diagnostics(out);
  return out;
}

}  // namespace smactr
