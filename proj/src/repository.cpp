#include "smactr/repository.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace smactr {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool write_file(const fs::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return false;
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) return false;
  }
  fs::rename(tmp, path, ec);
  return !ec;
}

// --- history ------------------------------------------------------------

std::string format_history_line(const HistoryRecord& r) {
  std::ostringstream os;
  os << r.timestamp << '\t' << r.event << '\t' << r.artifact_id << '\t' << r.version << '\t' << r.hash << '\t'
     << to_string(r.status) << '\n';
  return os.str();
}

Result<std::vector<HistoryRecord>> parse_history(std::string_view text) {
  std::vector<HistoryRecord> out;
  Diagnostics diags;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (std::size_t pos; (pos = line.find('\t', start)) != std::string::npos; start = pos + 1) {
      cols.push_back(line.substr(start, pos - start));
    }
    cols.push_back(line.substr(start));
    HistoryRecord r;
    bool ok = cols.size() == 6;
    if (ok) {
      r.timestamp = cols[0];
      r.event = cols[1];
      r.artifact_id = cols[2];
      try {
        r.version = std::stoi(cols[3]);
      } catch (const std::exception&) {
        ok = false;
      }
      r.hash = cols[4];
      auto st = parse_status(cols[5]);
      ok = ok && st.has_value();
      if (st) r.status = *st;
    }
    if (!ok) {
      diags.push_back(make_diag("E_PARSE", kHistoryFile, "line " + std::to_string(lineno), "malformed history record"));
      continue;
    }
    out.push_back(std::move(r));
  }
  if (!diags.empty()) return diags;
  return out;
}

namespace {

const HistoryRecord* last_record(const std::vector<HistoryRecord>& history, std::string_view id) {
  const HistoryRecord* last = nullptr;
  for (const auto& r : history) {
    if (r.artifact_id == id) last = &r;
  }
  return last;
}

bool append_history(const fs::path& root, const HistoryRecord& r) {
  std::ofstream out(root / kHistoryFile, std::ios::binary | std::ios::app);
  out << format_history_line(r);
  return static_cast<bool>(out);
}

std::string next_event(const HistoryRecord* last, ArtifactStatus status) {
  if (!last) return "created";
  if (status == ArtifactStatus::final && last->status == ArtifactStatus::draft) return "finalized";
  return "updated";
}

}  // namespace

// --- repository ---------------------------------------------------------

std::string artifact_relpath(const ArtifactMeta& meta) {
  return "artifacts/" + std::string(stage_dir(meta.stage)) + "/" + meta.id + ".json";
}

const LoadedArtifact* AuditRepository::find(std::string_view id) const {
  for (const auto& a : artifacts) {
    if (a.doc.meta.id == id) return &a;
  }
  return nullptr;
}

std::vector<const LoadedArtifact*> AuditRepository::of_kind(ArtifactKind kind) const {
  std::vector<const LoadedArtifact*> out;
  for (const auto& a : artifacts) {
    if (a.doc.kind() == kind) out.push_back(&a);
  }
  return out;
}

const LoadedArtifact* AuditRepository::primary(ArtifactKind kind) const {
  const LoadedArtifact* first = nullptr;
  for (const auto& a : artifacts) {
    if (a.doc.kind() != kind) continue;
    if (a.valid()) return &a;
    if (!first) first = &a;
  }
  return first;
}

Inventory AuditRepository::inventory() const {
  Inventory inv;
  for (ArtifactKind k : kAllKinds) inv[k] = false;
  for (const auto& a : artifacts) {
    if (a.valid()) inv[a.doc.kind()] = true;
  }
  return inv;
}

std::optional<FmeaRegister> AuditRepository::risk_register() const {
  if (const auto* reg = primary_body<FmeaRegister>(ArtifactKind::Fmea)) return *reg;
  return std::nullopt;
}

Diagnostics AuditRepository::all_diagnostics() const {
  Diagnostics out = load_diagnostics;
  for (const auto& a : artifacts) append(out, a.diagnostics);
  sort_diagnostics(out);
  return out;
}

void AuditRepository::revalidate() {
  context = ValidationContext{};
  context.stage_of = stage_assignment(requirements);
  context.skew_threshold = manifest.skew_threshold;
  context.risk_matrix = manifest.matrix();
  context.closed_question_verbs = manifest.closed_question_verbs;
  for (const auto& a : artifacts) {
    if (a.file == manifest.principles_file) {
      if (const auto* decl = a.doc.as<PrinciplesDeclaration>()) context.principles = decl->principles;
    }
  }
  for (auto& a : artifacts) {
    a.diagnostics = validate_artifact(a.doc, context);
    const std::string expected = artifact_relpath(a.doc.meta);
    if (a.file != expected) {
      const fs::path actual(a.file);
      if (actual.stem().string() != a.doc.meta.id) {
        a.diagnostics.push_back(make_diag("E_ID_MISMATCH", a.doc.meta.id, "meta.id",
                                          "stored as " + a.file + ", expected " + expected));
      }
      if (actual.parent_path().filename().string() != stage_dir(a.doc.meta.stage)) {
        a.diagnostics.push_back(make_diag("E_STAGE_MISMATCH", a.doc.meta.id, "meta.stage",
                                          "stored as " + a.file + ", expected " + expected));
      }
    }
    sort_diagnostics(a.diagnostics);
  }
}

bool AuditRepository::remove(std::string_view id) {
  auto it = std::find_if(artifacts.begin(), artifacts.end(),
                         [&](const LoadedArtifact& a) { return a.doc.meta.id == id; });
  if (it == artifacts.end()) return false;
  artifacts.erase(it);
  revalidate();
  return true;
}

namespace {

void add_artifact(AuditRepository& repo, LoadedArtifact loaded) {
  if (repo.find(loaded.doc.meta.id)) {
    repo.load_diagnostics.push_back(make_diag("E_DUPLICATE_ID", loaded.doc.meta.id, "meta.id",
                                              "id already used; " + loaded.file + " ignored"));
    return;
  }
  repo.artifacts.push_back(std::move(loaded));
}

void sort_artifacts(AuditRepository& repo) {
  std::sort(repo.artifacts.begin(), repo.artifacts.end(),
            [](const LoadedArtifact& a, const LoadedArtifact& b) { return a.doc.meta.id < b.doc.meta.id; });
}

}  // namespace

Result<AuditRepository> AuditRepository::from_documents(Manifest manifest, std::vector<ArtifactDocument> docs,
                                                        WorkflowState state, std::vector<HistoryRecord> history) {
  AuditRepository repo;
  auto table = requirement_table(manifest);
  if (!table) return table.diagnostics();
  repo.manifest = std::move(manifest);
  repo.requirements = table.value();
  repo.state = std::move(state);
  repo.history = std::move(history);
  std::sort(docs.begin(), docs.end(),
            [](const ArtifactDocument& a, const ArtifactDocument& b) { return a.meta.id < b.meta.id; });
  for (auto& d : docs) {
    seal(d);
    LoadedArtifact loaded{artifact_relpath(d.meta), std::move(d), {}};
    add_artifact(repo, std::move(loaded));
  }
  sort_artifacts(repo);
  repo.revalidate();
  return repo;
}

Result<AuditRepository> load_repository(const fs::path& root) {
  const fs::path manifest_path = root / kManifestFile;
  if (!fs::exists(manifest_path)) {
    return make_diag("E_IO", "manifest", "", "no " + std::string(kManifestFile) + " in " + root.string());
  }
  auto manifest = parse_manifest(read_file(manifest_path));
  if (!manifest) return manifest.diagnostics();

  AuditRepository repo;
  repo.root = root;
  repo.manifest = manifest.value();
  auto table = requirement_table(repo.manifest);
  if (!table) return table.diagnostics();
  repo.requirements = table.value();

  const fs::path principles_path = root / repo.manifest.principles_file;
  if (!fs::exists(principles_path)) {
    repo.load_diagnostics.push_back(make_diag("E_IO", "manifest", "principles_file",
                                              "principles file " + repo.manifest.principles_file + " does not exist"));
  }

  std::vector<fs::path> files;
  std::error_code ec;
  if (fs::is_directory(root / "artifacts")) {
    for (const auto& entry : fs::recursive_directory_iterator(root / "artifacts", ec)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  for (const auto& path : files) {
    const std::string rel = fs::relative(path, root).generic_string();
    auto parsed = parse_artifact(read_file(path));
    if (!parsed) {
      for (auto d : parsed.diagnostics()) {
        if (d.artifact_id.empty()) d.artifact_id = rel;
        repo.load_diagnostics.push_back(std::move(d));
      }
      repo.unreadable_files.push_back(rel);
      continue;
    }
    add_artifact(repo, LoadedArtifact{rel, std::move(parsed).value(), {}});
  }
  sort_artifacts(repo);

  if (fs::exists(root / kStateFile)) {
    auto state = parse_workflow_state(read_file(root / kStateFile));
    if (state) {
      repo.state = state.value();
    } else {
      append(repo.load_diagnostics, state.diagnostics());
    }
  }
  if (fs::exists(root / kHistoryFile)) {
    auto history = parse_history(read_file(root / kHistoryFile));
    if (history) {
      repo.history = history.value();
    } else {
      append(repo.load_diagnostics, history.diagnostics());
    }
  }
  repo.revalidate();
  sort_diagnostics(repo.load_diagnostics);
  return repo;
}

// --- locking ------------------------------------------------------------

Result<WriterLock> WriterLock::acquire(const fs::path& root) {
  const fs::path path = root / kLockFile;
  const int fd = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd < 0) return make_diag("E_IO", "", "", "cannot open " + path.string());
  if (::flock(fd, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd);
    return make_diag("E_LOCKED", "", "", "repository is locked by another writer");
  }
  return WriterLock(fd);
}

WriterLock::WriterLock(WriterLock&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }

WriterLock::~WriterLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

// --- writing ------------------------------------------------------------

Result<bool> save_state(const fs::path& root, const WorkflowState& state) {
  if (!write_file(root / kStateFile, serialize_workflow_state(state))) {
    return make_diag("E_IO", "", "", "cannot write " + std::string(kStateFile));
  }
  return true;
}

Result<HistoryRecord> write_artifact(const fs::path& root, const ArtifactDocument& doc,
                                     const std::vector<HistoryRecord>& history, const std::string& timestamp) {
  ArtifactDocument sealed = doc;
  seal(sealed);
  const HistoryRecord* last = last_record(history, sealed.meta.id);
  const int expected_version = last ? last->version + 1 : 1;
  if (sealed.meta.version != expected_version) {
    return make_diag("E_HISTORY_GAP", sealed.meta.id, "meta.version",
                     "writing version " + std::to_string(sealed.meta.version) + ", expected " +
                         std::to_string(expected_version));
  }
  if (!write_file(root / artifact_relpath(sealed.meta), serialize_artifact(sealed))) {
    return make_diag("E_IO", sealed.meta.id, "", "cannot write " + artifact_relpath(sealed.meta));
  }
  HistoryRecord rec{timestamp, next_event(last, sealed.meta.status), sealed.meta.id, sealed.meta.version,
                    sealed.meta.content_hash, sealed.meta.status};
  if (!append_history(root, rec)) return make_diag("E_IO", sealed.meta.id, "", "cannot append history");
  return rec;
}

RecordOutcome record_artifacts(const fs::path& root, const std::string& timestamp) {
  RecordOutcome out;
  std::vector<HistoryRecord> history;
  if (fs::exists(root / kHistoryFile)) {
    auto parsed = parse_history(read_file(root / kHistoryFile));
    if (!parsed) {
      out.diagnostics = parsed.diagnostics();
      return out;
    }
    history = parsed.value();
  }

  std::vector<std::pair<std::string, fs::path>> files;  // (id, path), recorded in id order
  std::map<std::string, ArtifactDocument> docs;
  std::error_code ec;
  if (fs::is_directory(root / "artifacts")) {
    for (const auto& entry : fs::recursive_directory_iterator(root / "artifacts", ec)) {
      if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
      auto parsed = parse_artifact(read_file(entry.path()), ParseOptions{std::nullopt, false});
      if (!parsed) {
        for (auto d : parsed.diagnostics()) {
          if (d.artifact_id.empty()) d.artifact_id = fs::relative(entry.path(), root).generic_string();
          out.diagnostics.push_back(std::move(d));
        }
        continue;
      }
      const std::string id = parsed->meta.id;
      if (docs.count(id)) {
        out.diagnostics.push_back(make_diag("E_DUPLICATE_ID", id, "meta.id", "id stored in more than one file"));
        continue;
      }
      files.emplace_back(id, entry.path());
      docs.emplace(id, std::move(parsed).value());
    }
  }
  std::sort(files.begin(), files.end());

  for (const auto& [id, path] : files) {
    ArtifactDocument& doc = docs.at(id);
    const std::string hash = compute_content_hash(doc);
    const HistoryRecord* last = last_record(history, id);
    if (last && doc.meta.version == last->version) {
      if (hash != last->hash) {
        out.diagnostics.push_back(make_diag("E_HISTORY_GAP", id, "meta.version",
                                            "body changed without a version bump (version " +
                                                std::to_string(doc.meta.version) + ")"));
      }
      continue;
    }
    const int expected = last ? last->version + 1 : 1;
    if (doc.meta.version != expected) {
      out.diagnostics.push_back(make_diag("E_HISTORY_GAP", id, "meta.version",
                                          "version " + std::to_string(doc.meta.version) + " follows recorded " +
                                              std::to_string(last ? last->version : 0)));
      continue;
    }
    seal(doc);
    const std::string serialized = serialize_artifact(doc);
    if (read_file(path) != serialized && !write_file(path, serialized)) {
      out.diagnostics.push_back(make_diag("E_IO", id, "", "cannot rewrite " + path.string()));
      continue;
    }
    HistoryRecord rec{timestamp, next_event(last, doc.meta.status), id, doc.meta.version, hash, doc.meta.status};
    if (!append_history(root, rec)) {
      out.diagnostics.push_back(make_diag("E_IO", id, "", "cannot append history"));
      continue;
    }
    history.push_back(rec);
    out.records.push_back(std::move(rec));
  }
  sort_diagnostics(out.diagnostics);
  return out;
}

// --- init ---------------------------------------------------------------

namespace {

ArtifactDocument principles_template(const std::string& timestamp) {
  PrinciplesDeclaration decl;
  decl.statement = "AI principles the audited product is expected to uphold.";
  decl.principles = {
      {"transparency", "Transparency", "Decisions and data practices can be explained to those affected.", ""},
      {"justice-fairness", "Justice, Fairness & Non-Discrimination",
       "The system does not produce unjust or discriminatory outcomes.",
       "source spelling: Justice, Fariness & Non-Discrimination"},
      {"safety", "Safety & Non-Maleficence", "The system does not cause foreseeable harm.", ""},
      {"responsibility", "Responsibility & Accountability",
       "Ownership of outcomes is assigned and traceable.", ""},
      {"privacy", "Privacy", "Personal and sensitive data is protected.", ""},
  };
  ArtifactDocument doc;
  doc.meta = {"principles", ArtifactKind::PrinciplesDeclaration, ProducerRole::product_team, Stage::Scoping, 1,
              timestamp, "", ArtifactStatus::draft, std::nullopt};
  doc.body = std::move(decl);
  return doc;
}

ArtifactDocument prd_template(const InitOptions& options) {
  ProductRequirementsDoc prd;
  prd.product = options.product;
  ArtifactDocument doc;
  doc.meta = {"prd", ArtifactKind::ProductRequirementsDoc, ProducerRole::product_team, Stage::Scoping, 1,
              options.timestamp, "", ArtifactStatus::draft, std::nullopt};
  doc.body = std::move(prd);
  return doc;
}

}  // namespace

Result<AuditRepository> init_repository(const fs::path& root, const InitOptions& options) {
  std::error_code ec;
  if (fs::exists(root) && (!fs::is_directory(root) || !fs::is_empty(root))) {
    return make_diag("E_EXISTS", "", "", root.string() + " exists and is not empty");
  }
  fs::create_directories(root, ec);
  if (ec) return make_diag("E_IO", "", "", "cannot create " + root.string());
  for (Stage s : kAllStages) fs::create_directories(root / "artifacts" / stage_dir(s), ec);

  Manifest manifest;
  manifest.audit_id = options.audit_id;
  manifest.product = options.product;
  manifest.profile = options.profile;
  if (!write_file(root / kManifestFile, serialize_manifest(manifest))) {
    return make_diag("E_IO", "", "", "cannot write manifest");
  }
  if (auto saved = save_state(root, WorkflowState{}); !saved) return saved.diagnostics();
  if (!write_file(root / kHistoryFile, "")) return make_diag("E_IO", "", "", "cannot write history");

  auto lock = WriterLock::acquire(root);
  if (!lock) return lock.diagnostics();
  std::vector<HistoryRecord> history;
  for (const auto& doc : {principles_template(options.timestamp), prd_template(options)}) {
    auto rec = write_artifact(root, doc, history, options.timestamp);
    if (!rec) return rec.diagnostics();
    history.push_back(rec.value());
  }
  return load_repository(root);
}

}  // namespace smactr
