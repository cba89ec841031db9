#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "smactr/artifact.hpp"
#include "smactr/checklist.hpp"
#include "smactr/manifest.hpp"
#include "smactr/result.hpp"
#include "smactr/workflow.hpp"

namespace smactr {

namespace fs = std::filesystem;

inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kStateFile = "state.lock";
inline constexpr const char* kHistoryFile = "history.log";
inline constexpr const char* kGraphFile = "adhf.graph";
inline constexpr const char* kReportFile = "audit_report.txt";
inline constexpr const char* kLockFile = ".writer.lock";

/// One line of history.log: an artifact version entering the record.
struct HistoryRecord {
  std::string timestamp;
  std::string event;  // created | updated | finalized
  std::string artifact_id;
  int version = 0;
  std::string hash;
  ArtifactStatus status = ArtifactStatus::draft;
  bool operator==(const HistoryRecord&) const = default;
};

Result<std::vector<HistoryRecord>> parse_history(std::string_view text);
std::string format_history_line(const HistoryRecord& record);

struct LoadedArtifact {
  std::string file;  // relative to the repository root
  ArtifactDocument doc;
  Diagnostics diagnostics;  // validation and placement findings

  bool valid() const { return !has_errors(diagnostics); }
};

/// Snapshot of an audit repository. Artifacts that fail to parse are left out
/// of `artifacts` and reported in `load_diagnostics`.
struct AuditRepository {
  fs::path root;
  Manifest manifest;
  RequirementTable requirements;
  ValidationContext context;
  std::vector<LoadedArtifact> artifacts;  // sorted by id
  Diagnostics load_diagnostics;
  std::vector<std::string> unreadable_files;
  WorkflowState state;
  std::vector<HistoryRecord> history;

  const LoadedArtifact* find(std::string_view id) const;
  std::vector<const LoadedArtifact*> of_kind(ArtifactKind kind) const;

  /// First artifact of `kind` in id order, preferring valid ones.
  const LoadedArtifact* primary(ArtifactKind kind) const;

  template <class T>
  const T* primary_body(ArtifactKind kind) const {
    const LoadedArtifact* a = primary(kind);
    return a ? a->doc.as<T>() : nullptr;
  }

  Inventory inventory() const;
  const std::vector<Principle>& principles() const { return context.principles; }
  std::optional<FmeaRegister> risk_register() const;

  /// All diagnostics: load problems plus per-artifact findings, sorted.
  Diagnostics all_diagnostics() const;

  /// Builds an in-memory repository from documents, as if each were stored at
  /// artifacts/<stage>/<id>.json. Used by tests and by tools that assemble
  /// repositories before writing them.
  static Result<AuditRepository> from_documents(Manifest manifest, std::vector<ArtifactDocument> docs,
                                                WorkflowState state = {},
                                                std::vector<HistoryRecord> history = {});

  /// Recomputes principles, context and per-artifact validation.
  void revalidate();

  /// Drops one artifact (by id) and revalidates. Returns false if absent.
  bool remove(std::string_view id);
};

std::string artifact_relpath(const ArtifactMeta& meta);

/// Loads manifest, artifacts, state and history. Fails only when the
/// manifest itself is unreadable or the configuration is contradictory.
Result<AuditRepository> load_repository(const fs::path& root);

/// Exclusive writer lock (flock on .writer.lock). Non-blocking: E_LOCKED if
/// another writer holds it.
class WriterLock {
 public:
  static Result<WriterLock> acquire(const fs::path& root);
  WriterLock(WriterLock&& other) noexcept;
  WriterLock& operator=(WriterLock&&) = delete;
  WriterLock(const WriterLock&) = delete;
  ~WriterLock();

 private:
  explicit WriterLock(int fd) : fd_(fd) {}
  int fd_ = -1;
};

struct InitOptions {
  Profile profile = Profile::full;
  std::string audit_id = "audit";
  std::string product = "unnamed product";
  std::string timestamp;
};

/// Creates manifest, stage directories, state, history and draft templates
/// for the Scoping inputs. E_EXISTS if `root` exists and is not empty.
Result<AuditRepository> init_repository(const fs::path& root, const InitOptions& options);

/// Writes (seals) an artifact and appends its history record. The caller
/// holds the writer lock. The version must be new for this id.
Result<HistoryRecord> write_artifact(const fs::path& root, const ArtifactDocument& doc,
                                     const std::vector<HistoryRecord>& history, const std::string& timestamp);

struct RecordOutcome {
  std::vector<HistoryRecord> records;  // appended by this call
  Diagnostics diagnostics;             // files that could not be recorded
};

/// Brings history up to date with the artifact files: unrecorded versions are
/// sealed (content_hash recomputed) and recorded; a body changed without a
/// version bump, or a version jump, is E_HISTORY_GAP. The caller holds the
/// writer lock.
RecordOutcome record_artifacts(const fs::path& root, const std::string& timestamp);

Result<bool> save_state(const fs::path& root, const WorkflowState& state);

std::string read_file(const fs::path& path);
bool write_file(const fs::path& path, std::string_view content);

}  // namespace smactr
