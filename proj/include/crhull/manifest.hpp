#pragma once

#include <json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "crhull/manifold.hpp"

namespace crhull {

inline constexpr int kManifestVersion = 1;

/// Input document: the manifold in normal form plus command parameters.
///
///   { "version": 1,
///     "manifold": { "n": 3, "gamma": 1.0, "flat": true,
///                   "F": [ {"a": [2], "b": 1, "c": 0, "re": 1.0, "im": 0.0}, ... ],
///                   "f": [ [ ...terms of f_1... ], ... ],
///                   "domain": { "T": 0.5, "R": 1.0 } },
///     "run": { ...command parameters, see commands.hpp... } }
struct Manifest {
  int version = kManifestVersion;
  ManifoldSpec spec;
  nlohmann::json run = nlohmann::json::object();
  std::vector<std::string> diagnostics;  // validate_spec output

  bool valid() const { return diagnostics.empty(); }
};

/// Throws Error(ErrorCode::Schema) naming the offending field path.
Manifest parse_manifest(std::string_view text);

nlohmann::json terms_to_json(const BiPoly& p);
BiPoly terms_from_json(const nlohmann::json& j, std::size_t t_arity, const std::string& path);

nlohmann::json manifest_to_json(const Manifest& m);
/// Canonical text: sorted keys, terms in exponent order, no whitespace.
std::string serialize_manifest(const Manifest& m);
/// FNV-1a 64-bit hash of the canonical text, as 16 hex digits.
std::string fingerprint(const Manifest& m);

}  // namespace crhull
