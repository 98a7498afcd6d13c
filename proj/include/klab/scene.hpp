#pragma once

#include "klab/certificate.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace klab {

/// Parse or validation problem in a scene document. `where` locates it
/// (line:column for JSON syntax, a field path otherwise).
struct SceneError : std::runtime_error {
  SceneError(std::string where, const std::string &message);
  std::string where;
};

struct RunOptions {
  std::uint64_t seed = 0x6b6c6162ULL;
  /// Sample count for numeric zero tests and sampled groupoid checks.
  int samples = 64;
  double tolerance = 1e-9;
  bool parallel = false;
};

struct ReportEntry {
  std::string directive;
  std::string target;
  Verdict verdict = Verdict::proved;
  std::vector<Certificate> checks;
  std::vector<std::pair<std::string, std::string>> output;
  /// Non-empty whenever the verdict is fail.
  std::vector<std::string> witnesses;
};

struct Report {
  std::string scene;
  RunOptions options;
  std::vector<ReportEntry> entries;

  bool passed() const;
  int exit_code() const { return passed() ? 0 : 1; }
};

/// Runs every directive of a scene document in order. Throws SceneError.
Report run_scene(std::string_view text, const RunOptions &options, std::string scene_name = "scene");
Report run_scene_file(const std::string &path, const RunOptions &options);

/// Deterministic renderings: identical reports give identical bytes.
std::string to_json(const Report &report);
std::string to_text(const Report &report);

/// Definition of the identities a directive certifies. Throws SceneError
/// for unknown directives.
std::string explain(std::string_view directive);
std::vector<std::string> directive_names();

} // namespace klab
