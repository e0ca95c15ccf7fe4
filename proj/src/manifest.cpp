#include "crhull/manifest.hpp"

#include <cstdint>
#include <cstdio>

#include "crhull/error.hpp"

namespace crhull {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::Schema, path + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(path + "." + key, "missing field");
  return *it;
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) schema_error(path, "expected an integer");
  return j.get<int>();
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  return j.get<double>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) schema_error(path, "expected a boolean");
  return j.get<bool>();
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) schema_error(path + "." + it.key(), "unknown field");
  }
}

}  // namespace

json terms_to_json(const BiPoly& p) {
  json out = json::array();
  for (const auto& [m, c] : p.terms()) {
    out.push_back({{"a", m.t}, {"b", m.w}, {"c", m.wbar}, {"re", c.real()}, {"im", c.imag()}});
  }
  return out;
}

BiPoly terms_from_json(const json& j, std::size_t t_arity, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array of terms");
  BiPoly p(t_arity);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = path + "[" + std::to_string(i) + "]";
    const json& term = j[i];
    if (!term.is_object()) schema_error(at, "expected a term object");
    reject_unknown(term, {"a", "b", "c", "re", "im"}, at);
    Monomial m;
    const json& a = require(term, "a", at);
    if (!a.is_array()) schema_error(at + ".a", "expected an array of integers");
    if (a.size() != t_arity)
      schema_error(at + ".a", "expected " + std::to_string(t_arity) + " t-exponents, got " +
                                  std::to_string(a.size()));
    for (std::size_t k = 0; k < a.size(); ++k) {
      const int e = as_int(a[k], at + ".a[" + std::to_string(k) + "]");
      if (e < 0) schema_error(at + ".a[" + std::to_string(k) + "]", "negative exponent");
      m.t.push_back(e);
    }
    m.w = as_int(require(term, "b", at), at + ".b");
    m.wbar = as_int(require(term, "c", at), at + ".c");
    if (m.w < 0 || m.wbar < 0) schema_error(at, "negative exponent");
    const double re = term.contains("re") ? as_number(term["re"], at + ".re") : 0.0;
    const double im = term.contains("im") ? as_number(term["im"], at + ".im") : 0.0;
    if (p.coefficient(m) != Complex{}) schema_error(at, "duplicate term " + describe(m));
    p.add_term(m, {re, im});
  }
  return p;
}

Manifest parse_manifest(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Schema, std::string("manifest: ") + e.what());
  }
  if (!doc.is_object()) schema_error("$", "expected an object");
  reject_unknown(doc, {"version", "manifold", "run"}, "$");

  Manifest m;
  m.version = as_int(require(doc, "version", "$"), "$.version");
  if (m.version != kManifestVersion)
    schema_error("$.version", "unsupported version " + std::to_string(m.version));

  const json& mf = require(doc, "manifold", "$");
  const std::string mp = "$.manifold";
  if (!mf.is_object()) schema_error(mp, "expected an object");
  reject_unknown(mf, {"n", "gamma", "flat", "F", "f", "domain"}, mp);
  ManifoldSpec& s = m.spec;
  s.n = as_int(require(mf, "n", mp), mp + ".n");
  if (s.n < 2) schema_error(mp + ".n", "n must be at least 2");
  s.gamma = as_number(require(mf, "gamma", mp), mp + ".gamma");
  s.flat = mf.contains("flat") ? as_bool(mf["flat"], mp + ".flat") : false;
  s.F = terms_from_json(require(mf, "F", mp), s.t_arity(), mp + ".F");
  s.f.clear();
  if (mf.contains("f")) {
    const json& fl = mf["f"];
    if (!fl.is_array()) schema_error(mp + ".f", "expected an array of term lists");
    for (std::size_t j = 0; j < fl.size(); ++j)
      s.f.push_back(terms_from_json(fl[j], s.t_arity(), mp + ".f[" + std::to_string(j) + "]"));
  }
  const json& dom = require(mf, "domain", mp);
  reject_unknown(dom, {"T", "R"}, mp + ".domain");
  s.T = dom.contains("T") ? as_number(dom["T"], mp + ".domain.T") : 1.0;
  s.R = as_number(require(dom, "R", mp + ".domain"), mp + ".domain.R");

  if (doc.contains("run")) {
    if (!doc["run"].is_object()) schema_error("$.run", "expected an object");
    m.run = doc["run"];
  }
  m.diagnostics = validate_spec(s);
  return m;
}

json manifest_to_json(const Manifest& m) {
  json f = json::array();
  for (const BiPoly& p : m.spec.f) f.push_back(terms_to_json(p));
  return {{"version", m.version},
          {"manifold",
           {{"n", m.spec.n},
            {"gamma", m.spec.gamma},
            {"flat", m.spec.flat},
            {"F", terms_to_json(m.spec.F)},
            {"f", f},
            {"domain", {{"T", m.spec.T}, {"R", m.spec.R}}}}},
          {"run", m.run}};
}

std::string serialize_manifest(const Manifest& m) { return manifest_to_json(m).dump(); }

std::string fingerprint(const Manifest& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize_manifest(m)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace crhull
