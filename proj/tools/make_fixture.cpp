// Writes one of the two case-study audit repositories to disk.

#include <CLI11.hpp>

#include <iostream>

#include "fixtures.hpp"
#include "smactr/clock.hpp"

using namespace smactr;

int main(int argc, char** argv) {
  CLI::App app{"Write a case-study audit repository", "make_fixture"};
  std::string which;
  std::string dir;
  bool complete = false;
  app.add_option("case", which, "smile or child")->required()->check(CLI::IsMember({"smile", "child"}));
  app.add_option("dir", dir, "Target directory (absent or empty)")->required();
  app.add_flag("--complete", complete, "Ingest tests, finalize the FMEA and add the risk chart");
  CLI11_PARSE(app, argc, argv);

  const fixtures::CaseStudy cs = which == "smile" ? fixtures::smile_booth() : fixtures::child_abuse();
  InitOptions options;
  options.audit_id = cs.manifest.audit_id;
  options.product = cs.manifest.product;
  options.timestamp = now_timestamp();
  auto repo = init_repository(dir, options);
  if (!repo) {
    std::cerr << format_text(repo.diagnostics());
    return 2;
  }
  const auto docs = complete ? fixtures::completed(cs, false) : cs.all();
  auto written = fixtures::write_documents(dir, docs, options.timestamp);
  if (!written) {
    std::cerr << format_text(written.diagnostics());
    return 2;
  }
  std::cout << "wrote " << docs.size() << " artifacts to " << dir << "\n";
  return 0;
}
