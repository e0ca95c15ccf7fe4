#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crhull/manifest.hpp"

namespace crhull {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportVersion = 1;

enum class Verdict { Certified, NotCertified, EvidenceOnly, InvalidInput };

const char* to_string(Verdict v) noexcept;
int exit_code(Verdict v) noexcept;

/// Command-line overrides; unset fields fall back to manifest "run" values,
/// then to per-command defaults.
struct RunOptions {
  std::optional<int> grid_radial;
  std::optional<int> grid_angular;
  std::optional<int> t_grid;
  std::optional<int> degree;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  bool timing = false;
};

struct Report {
  Verdict verdict = Verdict::InvalidInput;
  std::string json;  // pretty-printed, trailing newline
  std::string csv;   // empty when the command has no tabular output
};

const std::vector<std::string>& command_names();

/// Dispatches `command` on a parsed manifest. Never throws for bad input:
/// failures become invalid-input or not-certified reports.
Report run_command(const Manifest& manifest, std::string_view command, const RunOptions& options);

/// Parses `text` then dispatches; schema errors become invalid-input reports.
Report run_command_text(std::string_view text, std::string_view command, const RunOptions& options);

}  // namespace crhull
