#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "smactr/artifact.hpp"
#include "smactr/manifest.hpp"
#include "smactr/repository.hpp"

namespace smactr::fixtures {

inline constexpr const char* kTimestamp = "2026-01-05T09:00:00Z";

/// Sealed version-1 document with the kind's default producer and stage.
ArtifactDocument make_doc(std::string id, ArtifactBody body, ArtifactStatus status = ArtifactStatus::final,
                          std::vector<std::string> evidences = {});

/// Documents of one audit as they are handed in stage by stage. The FMEA is
/// a scored Mapping draft; testing holds only the adversarial test report.
struct CaseStudy {
  Manifest manifest;
  std::vector<ArtifactDocument> scoping;
  std::vector<ArtifactDocument> mapping;
  std::vector<ArtifactDocument> collection;
  std::vector<ArtifactDocument> testing;
  std::vector<ArtifactDocument> reflection;  // remediation plan only
  std::string fmea_id = "fmea";
  std::string tests_id = "adversarial-tests";
  std::string plan_id = "remediation";

  std::vector<ArtifactDocument> all() const;
};

CaseStudy smile_booth();
CaseStudy child_abuse();

/// Every artifact the final gate needs: test results ingested into a final
/// FMEA, a matching risk chart and, unless `with_report` is false, the
/// summary report.
std::vector<ArtifactDocument> completed(const CaseStudy& cs, bool with_report = true);

Result<AuditRepository> completed_repository(const CaseStudy& cs, bool with_report = true);

/// Writes documents into an initialized repository at `root`, recording each
/// in history.
Result<bool> write_documents(const std::filesystem::path& root, const std::vector<ArtifactDocument>& docs,
                             const std::string& timestamp = kTimestamp);

/// Library-level audit of `cs` in an empty directory: init, then each
/// stage's documents written and the next gate passed, ending at Reflection
/// with the summary report written. Stage k is stamped 2026-01-0<k+1>.
Result<AuditRepository> run_session(const std::filesystem::path& root, const CaseStudy& cs);

}  // namespace smactr::fixtures
