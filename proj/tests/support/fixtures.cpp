#include "fixtures.hpp"

#include "smactr/report.hpp"
#include "smactr/risk.hpp"

namespace smactr::fixtures {

ArtifactDocument make_doc(std::string id, ArtifactBody body, ArtifactStatus status,
                          std::vector<std::string> evidences) {
  ArtifactDocument doc;
  doc.body = std::move(body);
  doc.evidences = std::move(evidences);
  doc.meta.id = std::move(id);
  doc.meta.kind = doc.kind();
  doc.meta.producer = default_producer(doc.kind());
  doc.meta.stage = default_stage(doc.kind());
  doc.meta.version = 1;
  doc.meta.created_at = kTimestamp;
  doc.meta.status = status;
  seal(doc);
  return doc;
}

std::vector<ArtifactDocument> CaseStudy::all() const {
  std::vector<ArtifactDocument> out;
  for (const auto* group : {&scoping, &mapping, &collection, &testing, &reflection}) {
    out.insert(out.end(), group->begin(), group->end());
  }
  return out;
}

namespace {

PrinciplesDeclaration principles() {
  PrinciplesDeclaration d;
  d.statement = "Company X commits to these AI principles for every product it builds or audits.";
  d.principles = {
      {"transparency", "Transparency", "Decisions and data practices can be explained to those affected.", ""},
      {"justice-fairness", "Justice, Fairness & Non-Discrimination",
       "The system does not produce unjust or discriminatory outcomes.",
       "source spelling: Justice, Fariness & Non-Discrimination"},
      {"safety", "Safety & Non-Maleficence", "The system does not cause foreseeable harm.", ""},
      {"responsibility", "Responsibility & Accountability", "Ownership of outcomes is assigned and traceable.", ""},
      {"privacy", "Privacy", "Personal and sensitive data is protected.", ""},
  };
  return d;
}

FmeaEntry entry(std::string id, std::string mode, std::string effect, std::string cause, int severity,
                int likelihood, std::vector<std::string> principles, std::string rationale = {}) {
  FmeaEntry e;
  e.id = std::move(id);
  e.failure_mode = std::move(mode);
  e.effect = std::move(effect);
  e.cause = std::move(cause);
  e.severity = severity;
  e.likelihood = likelihood;
  e.detection = 3;
  e.threatened_principles = std::move(principles);
  e.rationale = std::move(rationale);
  return e;
}

TestCase test(std::string id, std::string target, std::string description, std::string slice, int trials,
              int failures) {
  TestCase t;
  t.id = std::move(id);
  t.target_fmea = std::move(target);
  t.description = std::move(description);
  t.slice = std::move(slice);
  t.trials = trials;
  t.failures = failures;
  return t;
}

ChecklistItem item(std::string id, std::string prompt, std::optional<ArtifactKind> expected, std::string response) {
  ChecklistItem i;
  i.id = std::move(id);
  i.prompt = std::move(prompt);
  i.expected_artifact = expected;
  i.response = std::move(response);
  i.satisfied = ChecklistAnswer::yes;
  return i;
}

Manifest manifest(std::string audit_id, std::string product) {
  Manifest m;
  m.audit_id = std::move(audit_id);
  m.product = std::move(product);
  return m;
}

}  // namespace

CaseStudy smile_booth() {
  CaseStudy cs;
  cs.manifest = manifest("happy-go-lucky-smile", "Happy-Go-Lucky smile-triggered photo booth");
  using S = ArtifactStatus;

  ProductRequirementsDoc prd;
  prd.product = cs.manifest.product;
  prd.requirements = {
      {"req-trigger", "Trigger the booth camera when the subject smiles.", {"responsibility"}},
      {"req-inclusive", "Detect smiles equally well across demographic groups.", {"justice-fairness"}},
      {"req-consent", "Process face data only with the customer's consent.", {"privacy"}},
  };

  EthicalReview er;
  er.use_case = "Automatic photo capture in public booths triggered by a smile detector.";
  er.impacted_groups = {{"booth customers", "Photos are taken, or not taken, by the model."},
                        {"people with atypical expressions", "May be unable to trigger the camera."}};
  er.reviewers = {{"A. Okafor", "Company X ethics board", "accessibility"},
                  {"L. Brandt", "Happy-Go-Lucky", "product"},
                  {"M. Ito", "external", "privacy law"}};
  er.board_decision = BoardDecision::approve;

  SocialImpactAssessment sia;
  sia.impact_entries = {
      {ImpactCategory::experiences, "Customers whose smiles are not recognised are excluded from the product.", 3},
      {ImpactCategory::rights, "Face images of customers are captured and processed.", 3},
      {ImpactCategory::culture, "Norms on smiling for photographs differ between cultures.", 2},
  };
  sia.overall_severity = 3;

  cs.scoping = {make_doc("principles", principles()), make_doc("prd", prd),
                make_doc("ethical-review", er), make_doc("social-impact", sia)};

  StakeholderMap sm;
  sm.stakeholders = {{"L. Brandt", "product lead", "lbrandt@happy-go-lucky.example", "owns the booth roadmap"},
                     {"R. Singh", "ML engineer", "rsingh@happy-go-lucky.example", "trains the smile detector"},
                     {"A. Okafor", "auditor", "aokafor@companyx.example", "leads the internal audit"},
                     {"Booth customers", "end users", "", "represented through field interviews"}};

  SystemMap sys;
  sys.components = {{"camera", "Booth camera", "Captures the live video stream."},
                    {"detector", "Smile detector", "CNN trained on CelebA scoring each frame."},
                    {"trigger", "Shutter trigger", "Takes the photo when the score passes a threshold."},
                    {"storage", "Photo storage", "Keeps printed photos for 24 hours."}};
  sys.flows = {{"camera", "detector", "video frames"}, {"detector", "trigger", "smile score"},
               {"camera", "storage", "captured photo"}};

  DesignHistoryReview dhr;
  dhr.documents = {{"Booth PRD v1", "prd", "Initial product requirements."},
                   {"Detector design note", "wiki/smile-detector", "Model architecture and threshold choice."}};
  dhr.decisions = {{"dec-celeba", "2025-11-02", "Train the detector on CelebA."},
                   {"dec-threshold", "2025-11-20", "Trigger at smile score 0.8."}};

  FieldStudyReport fs;
  fs.interviews = {{"booth operator", "interviews/operator-01.txt",
                    {"Customers with glasses often retry several times.", "Some customers never smile for photos."}},
                   {"customer", "interviews/customer-04.txt", {"Would prefer a manual button."}}};

  FmeaRegister fmea;
  fmea.entries = {
      entry("fm-subgroup", "Lower smile detection accuracy for underrepresented groups",
            "Customers from these groups are excluded from the product", "Skewed CelebA demographics", 4, 2,
            {"justice-fairness"}),
      entry("fm-expression", "Smiles missed for users with alternative emotional expressions",
            "Users with autism or different cultural norms cannot trigger the booth", "Narrow notion of a smile", 4,
            2, {"justice-fairness"}),
      entry("fm-biometric", "Face data captured without informed consent", "Biometric data of customers is exposed",
            "Camera runs continuously and stores photos", 5, 2, {"privacy"},
            "Consent and storage are product design properties; assessed in design review, not adversarial tests."),
      entry("fm-affect", "Smiling treated as positive affect", "Misuse of the score as an emotion signal",
            "Ambiguous use case wording", 2, 3, {"transparency"}),
  };

  cs.mapping = {make_doc("stakeholders", sm), make_doc("system-map", sys), make_doc("design-history", dhr),
                make_doc("field-study", fs), make_doc(cs.fmea_id, fmea, S::draft)};

  DesignChecklist cl;
  cl.items = {
      item("cl-principles", "Which principles could the smile trigger put at risk?", std::nullopt,
           "Justice and privacy; see the FMEA."),
      item("cl-intended-use", "What documentation describes the model's intended use?", ArtifactKind::ModelCard,
           "The model card."),
      item("cl-data", "How was the training data collected and who is represented in it?", ArtifactKind::Datasheet,
           "The CelebA datasheet."),
      item("cl-users", "Who was interviewed about how the booth is used?", ArtifactKind::FieldStudyReport,
           "Operators and customers."),
      item("cl-system", "Where does face data flow inside the booth?", ArtifactKind::SystemMap, "The system map."),
  };

  ModelCard mc;
  mc.model_name = "smile-detector-v3";
  mc.intended_use = "Trigger photo capture when a subject poses with a smile.";
  mc.out_of_scope_uses = {"Inferring emotion or affect", "Identifying individuals"};
  mc.evaluation_data = "CelebA test split";
  mc.performance_by_group = {{"lighter-skinned", "accuracy", 0.93}, {"darker-skinned", "accuracy", 0.81},
                             {"aged 0-45", "accuracy", 0.92}, {"aged 46+", "accuracy", 0.85}};
  mc.limitations = "Smiling is a pose, not a measure of positive affect.";

  Datasheet ds;
  ds.dataset_name = "CelebA";
  ds.collection_process = "Celebrity face images collected from the web and annotated with 40 binary attributes.";
  ds.ethical_review_conducted = TriState::unknown;
  ds.relates_to_people = TriState::yes;
  ds.demographic_breakdown = {
      {"gender", {{"female", 0.581}, {"male", 0.42}}},
      {"skin type", {{"lighter", 0.142}, {"darker", 0.858}}},
      {"age", {{"0-45", 0.778}, {"46+", 0.221}}},
  };

  cs.collection = {make_doc("design-checklist", cl, S::final, {"dec-threshold"}),
                   make_doc("model-card", mc, S::final, {"req-trigger", "dec-celeba"}),
                   make_doc("datasheet", ds, S::final, {"req-inclusive"})};

  AdversarialTestingReport atr;
  atr.test_cases = {
      test("tc-subgroup", "fm-subgroup", "Counterfactual faces varying skin type and age", "darker-skinned, 46+", 200,
           60),
      test("tc-expression", "fm-expression", "Closed-mouth and asymmetric smiles", "alternative expressions", 100, 8),
      test("tc-affect", "fm-affect", "Posed smiles on neutral-affect subjects", "all", 100, 2),
  };
  TestCase occlusion = test("tc-occlusion", std::string(kNewFmeaTarget), "Glasses and face coverings",
                            "occluded faces", 50, 5);
  occlusion.new_entry = NewFailureMode{"fm-occlusion", "Glasses or face coverings suppress detection",
                                       "Customers must remove glasses to be photographed", "Few occluded faces in training data",
                                       2, {"justice-fairness"}};
  atr.test_cases.push_back(occlusion);
  cs.testing = {make_doc(cs.tests_id, atr)};

  RemediationPlan plan;
  plan.items = {
      {"rp-retrain", "fm-subgroup", "Retrain on more diverse data, adding underrepresented samples to CelebA.",
       "ML team", MitigationStatus::planned},
      {"rp-optin", "fm-biometric", "Opt-in screen with user permission; model trigger disabled by default.",
       "product team", MitigationStatus::planned},
      {"rp-disclaimer", "fm-biometric", "Privacy disclaimer on face data storage and consent.", "legal",
       MitigationStatus::planned},
      {"rp-button", "fm-expression", "Manual shutter button always available.", "product team",
       MitigationStatus::planned},
      {"rp-pose", "fm-affect", "Document smiling as a favourable photo pose, not affect.", "product team",
       MitigationStatus::planned},
      {"rp-occlusion", "fm-occlusion", "Add occluded faces to the training data.", "ML team",
       MitigationStatus::planned},
  };
  cs.reflection = {make_doc(cs.plan_id, plan, S::final, {"req-consent"})};
  return cs;
}

CaseStudy child_abuse() {
  CaseStudy cs;
  cs.manifest = manifest("child-screening", "Child abuse screening tool");
  using S = ArtifactStatus;

  ProductRequirementsDoc prd;
  prd.product = cs.manifest.product;
  prd.requirements = {
      {"req-screen", "Rank incoming referrals by risk of harm to the child.", {"safety"}},
      {"req-juvenile", "Protect juvenile records used for training and scoring.", {"privacy"}},
      {"req-equity", "Scores must not depend on race or socioeconomic status.", {"justice-fairness"}},
  };

  EthicalReview er;
  er.use_case = "Screening of child welfare referrals by predicted risk of harm.";
  er.impacted_groups = {{"children", "Missed referrals leave children in danger."},
                        {"families", "False referrals may lead to family separation."},
                        {"caseworkers", "Workload depends on referral volume."}};
  er.reviewers = {{"P. Nair", "Company X ethics board", "child welfare"},
                  {"D. Osei", "external", "civil rights"}};
  er.board_decision = BoardDecision::approve_with_conditions;
  er.conditions = {"Full adversarial testing on diverse profiles before any deployment decision."};

  SocialImpactAssessment sia;
  sia.impact_entries = {{ImpactCategory::health_wellbeing, "A missed referral can leave a child injured or dead.", 5},
                        {ImpactCategory::community, "Over-referral concentrates surveillance on poor families.", 4},
                        {ImpactCategory::rights, "Juvenile records are highly sensitive.", 4}};
  sia.overall_severity = 5;

  cs.scoping = {make_doc("principles", principles()), make_doc("prd", prd), make_doc("ethical-review", er),
                make_doc("social-impact", sia)};

  StakeholderMap sm;
  sm.stakeholders = {{"County child services", "client", "", "operates the hotline"},
                     {"Caseworkers", "operators", "", "act on screening scores"},
                     {"Families", "affected parties", "", "represented by advocacy groups"},
                     {"P. Nair", "auditor", "pnair@companyx.example", "leads the audit"}};

  SystemMap sys;
  sys.components = {{"intake", "Referral intake", "Hotline calls and reports."},
                    {"model", "Risk model", "Scores referrals from administrative records."},
                    {"records", "Administrative records", "Welfare, justice and health records incl. juveniles."},
                    {"screening", "Screening decision", "Caseworker decides whether to investigate."}};
  sys.flows = {{"intake", "model", "referral"}, {"records", "model", "history features"},
               {"model", "screening", "risk score"}};

  DesignHistoryReview dhr;
  dhr.documents = {{"County RFP", "rfp-2025", "Client request for a screening model."}};
  dhr.decisions = {{"dec-admin-data", "2025-10-10", "Use administrative records as model features."}};

  FieldStudyReport fs;
  fs.interviews = {{"caseworker", "interviews/caseworker-02.txt",
                    {"Scores would be used to triage a large backlog.", "Overrides are rarely documented."}}};

  FmeaRegister fmea;
  fmea.entries = {
      entry("fm-false-negative", "High-risk referral screened out", "A dead or injured child that could have been rescued",
            "Missing or biased features", 5, 2, {"safety"}),
      entry("fm-false-positive", "Low-risk referral screened in", "Staff overwhelmed; families separated unnecessarily",
            "Over-sensitive threshold", 4, 3, {"safety", "justice-fairness"}),
      entry("fm-juvenile-data", "Juvenile records exposed or misused", "Lasting harm to children's prospects",
            "Broad access to training data", 5, 2, {"privacy"},
            "Data handling is assessed through access-control review rather than model tests."),
      entry("fm-proxy-bias", "Model learns race or SES proxies", "Discriminatory screening of poor families",
            "Correlated administrative features", 4, 3, {"justice-fairness"}),
  };

  cs.mapping = {make_doc("stakeholders", sm), make_doc("system-map", sys), make_doc("design-history", dhr),
                make_doc("field-study", fs), make_doc(cs.fmea_id, fmea, S::draft)};

  DesignChecklist cl;
  cl.items = {item("cl-data", "Which records feed the model and who can access them?", ArtifactKind::Datasheet,
                   "The datasheet."),
              item("cl-use", "What decisions will caseworkers make with the score?", ArtifactKind::ModelCard,
                   "See intended use in the model card.")};

  ModelCard mc;
  mc.model_name = "referral-risk-v1";
  mc.intended_use = "Support, not replace, caseworker screening of referrals.";
  mc.out_of_scope_uses = {"Automated removal decisions"};
  mc.evaluation_data = "Held-out referrals 2019-2023";
  mc.performance_by_group = {{"all", "recall", 0.88}};
  mc.limitations = "Administrative data over-represents families using public services.";

  Datasheet ds;
  ds.dataset_name = "County referrals 2015-2023";
  ds.collection_process = "Administrative records linked across welfare, justice and health systems.";
  ds.ethical_review_conducted = TriState::yes;
  ds.relates_to_people = TriState::yes;

  cs.collection = {make_doc("design-checklist", cl), make_doc("model-card", mc, S::final, {"req-screen"}),
                   make_doc("datasheet", ds, S::final, {"req-juvenile", "req-equity"})};

  AdversarialTestingReport atr;
  atr.test_cases = {
      test("tc-profiles-fn", "fm-false-negative", "Diverse high-risk user profiles", "all profiles", 400, 12),
      test("tc-profiles-fp", "fm-false-positive", "Diverse low-risk user profiles", "all profiles", 400, 60),
      test("tc-ses", "fm-proxy-bias", "Profiles varied only in SES-correlated variables", "low SES", 200, 30),
  };
  cs.testing = {make_doc(cs.tests_id, atr)};

  RemediationPlan plan;
  plan.items = {
      {"rp-inquiry", "fm-false-negative", "Further inquiry into whether any model can meet the required miss rate.",
       "ethics board", MitigationStatus::under_inquiry},
      {"rp-review", "fm-false-positive", "Human review of every screened-in referral.", "county", MitigationStatus::planned},
      {"rp-access", "fm-juvenile-data", "Restrict juvenile record access to the scoring service.", "engineering",
       MitigationStatus::planned},
      {"rp-proxies", "fm-proxy-bias", "Remove SES proxies and retest.", "ML team", MitigationStatus::planned},
  };
  cs.reflection = {make_doc(cs.plan_id, plan)};
  return cs;
}

std::vector<ArtifactDocument> completed(const CaseStudy& cs, bool with_report) {
  std::vector<ArtifactDocument> docs = cs.all();
  const RiskMatrix matrix = cs.manifest.matrix();
  ArtifactDocument* fmea = nullptr;
  const ArtifactDocument* tests = nullptr;
  for (auto& d : docs) {
    if (d.meta.id == cs.fmea_id) fmea = &d;
    if (d.meta.id == cs.tests_id) tests = &d;
  }
  auto ingested = update_fmea_with_tests(*fmea->as<FmeaRegister>(), *tests->as<AdversarialTestingReport>(),
                                         cs.tests_id, matrix);
  fmea->body = ingested->updated;
  fmea->meta.version = 2;
  fmea->meta.status = ArtifactStatus::final;
  seal(*fmea);
  docs.push_back(make_doc("risk-chart", generate_chart(ingested->updated, matrix)));
  if (with_report) {
    auto repo = AuditRepository::from_documents(cs.manifest, docs);
    auto report = compile_report(*repo);
    docs.push_back(report_artifact(*report, "audit-summary", 1, kTimestamp));
  }
  return docs;
}

Result<AuditRepository> completed_repository(const CaseStudy& cs, bool with_report) {
  return AuditRepository::from_documents(cs.manifest, completed(cs, with_report));
}

Result<bool> write_documents(const std::filesystem::path& root, const std::vector<ArtifactDocument>& docs,
                             const std::string& timestamp) {
  auto history = parse_history(read_file(root / kHistoryFile));
  if (!history) return history.diagnostics();
  std::vector<HistoryRecord> records = history.value();
  auto lock = WriterLock::acquire(root);
  if (!lock) return lock.diagnostics();
  for (ArtifactDocument doc : docs) {
    int last = 0;
    for (const auto& r : records) {
      if (r.artifact_id == doc.meta.id) last = r.version;
    }
    doc.meta.version = last + 1;
    auto rec = write_artifact(root, doc, records, timestamp);
    if (!rec) return rec.diagnostics();
    records.push_back(rec.value());
  }
  return true;
}

Result<AuditRepository> run_session(const std::filesystem::path& root, const CaseStudy& cs) {
  auto stamp = [](int stage) { return "2026-01-0" + std::to_string(stage + 1) + "T09:00:00Z"; };
  InitOptions init;
  init.profile = cs.manifest.profile;
  init.audit_id = cs.manifest.audit_id;
  init.product = cs.manifest.product;
  init.timestamp = stamp(0);
  if (auto r = init_repository(root, init); !r) return r.diagnostics();

  const auto done = completed(cs, false);
  auto pick = [&](std::initializer_list<std::string> ids) {
    std::vector<ArtifactDocument> out;
    for (const auto& id : ids) {
      for (const auto& d : done) {
        if (d.meta.id == id) out.push_back(d);
      }
    }
    return out;
  };
  auto testing = cs.testing;
  for (auto& d : pick({cs.fmea_id, "risk-chart"})) testing.push_back(d);
  const std::vector<std::vector<ArtifactDocument>> batches = {cs.scoping, cs.mapping, cs.collection, testing,
                                                              cs.reflection};

  for (int k = 0; k < 5; ++k) {
    if (auto w = write_documents(root, batches[static_cast<std::size_t>(k)], stamp(k)); !w) return w.diagnostics();
    if (k == 4) break;
    auto repo = load_repository(root);
    if (!repo) return repo.diagnostics();
    auto state = advance_stage(*repo, kAllStages[static_cast<std::size_t>(k + 1)], stamp(k + 1));
    if (!state) return state.diagnostics();
    if (auto s = save_state(root, *state); !s) return s.diagnostics();
  }

  auto repo = load_repository(root);
  if (!repo) return repo.diagnostics();
  auto report = compile_report(*repo);
  if (!report) return report.diagnostics();
  if (auto w = write_documents(root, {report_artifact(*report, "audit-summary", 1, stamp(4))}, stamp(4)); !w) {
    return w.diagnostics();
  }
  return load_repository(root);
}

}  // namespace smactr::fixtures
