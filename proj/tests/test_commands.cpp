#include <doctest.h>

#include <fstream>
#include <sstream>

#include "crhull/commands.hpp"
#include "crhull/error.hpp"
#include "crhull/manifest.hpp"

using namespace crhull;
using nlohmann::json;

namespace {

std::string read(const std::string& name) {
  std::ifstream in(std::string(CRHULL_MANIFEST_DIR) + "/" + name);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kMinimal = R"({"version":1,"manifold":{"n":2,"gamma":1.0,"F":[],"domain":{"R":1.0}}})";

json run_json(const std::string& text, const char* command, RunOptions o = {}) {
  return json::parse(run_command_text(text, command, o).json);
}

}  // namespace

TEST_CASE("parse_manifest: minimal hyperbolic manifest is valid") {
  const Manifest m = parse_manifest(kMinimal);
  CHECK(m.valid());
  CHECK(m.spec.n == 2);
  CHECK(m.spec.gamma == 1.0);
  CHECK(m.spec.F.is_zero());
}

TEST_CASE("parse_manifest: order-3 violation is attached as a diagnostic") {
  const Manifest m = parse_manifest(
      R"({"version":1,"manifold":{"n":2,"gamma":1,"F":[{"a":[],"b":1,"c":1,"re":1,"im":0}],"domain":{"R":1}}})");
  REQUIRE(m.diagnostics.size() == 1);
  CHECK(m.diagnostics[0] == "F order-3 violation at (a=0,b=1,c=1)");
  const json r = run_json(
      R"({"version":1,"manifold":{"n":2,"gamma":1,"F":[{"a":[],"b":1,"c":1,"re":1,"im":0}],"domain":{"R":1}}})",
      "classify");
  CHECK(r["verdict"] == "invalid-input");
  CHECK(r["exit_code"] == 2);
}

TEST_CASE("parse_manifest: schema errors name the field") {
  auto message = [](const char* text) {
    try {
      parse_manifest(text);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Schema);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message(R"({"version":1})").find("$.manifold") != std::string::npos);
  CHECK(message(R"({"version":2,"manifold":{}})").find("$.version") != std::string::npos);
  CHECK(message(R"({"version":1,"manifold":{"n":2,"gamma":1,"F":[{"a":[1],"b":3,"c":0}],"domain":{"R":1}}})")
            .find("$.manifold.F[0].a") != std::string::npos);
  CHECK(message(R"({"version":1,"manifold":{"n":2,"gamma":"x","F":[],"domain":{"R":1}}})")
            .find("$.manifold.gamma") != std::string::npos);
  CHECK(message(R"({"version":1,"manifold":{"n":2,"gamma":1,"F":[],"domain":{"R":1},"extra":0}})")
            .find("$.manifold.extra") != std::string::npos);
  CHECK(message("{\"version\":1,\n \"manifold\": [}").find("line 2") != std::string::npos);
}

TEST_CASE("canonical serialization round trip") {
  for (const char* name : {"cubic.json", "flat_fixture.json", "sheets.json", "nonflat_fixture.json"}) {
    const Manifest m = parse_manifest(read(name));
    const std::string canonical = serialize_manifest(m);
    const Manifest again = parse_manifest(canonical);
    CHECK(serialize_manifest(again) == canonical);
    CHECK(fingerprint(again) == fingerprint(m));
    CHECK(fingerprint(m).size() == 16);
  }
  // key order and whitespace do not change the fingerprint; content does
  const Manifest a = parse_manifest(kMinimal);
  const Manifest b = parse_manifest(R"({ "manifold": {"domain":{"R":1.0},"F":[],"gamma":1.0,"n":2}, "version": 1 })");
  CHECK(fingerprint(a) == fingerprint(b));
  const Manifest c = parse_manifest(R"({"version":1,"manifold":{"n":2,"gamma":1.5,"F":[],"domain":{"R":1.0}}})");
  CHECK(fingerprint(a) != fingerprint(c));
}

TEST_CASE("terms are emitted in exponent order") {
  const Manifest m = parse_manifest(
      R"({"version":1,"manifold":{"n":2,"gamma":1,"F":[{"a":[],"b":3,"c":0,"re":1},{"a":[],"b":0,"c":3,"re":2}],"domain":{"R":1}}})");
  const json j = manifest_to_json(m);
  CHECK(j["manifold"]["F"][0]["b"] == 0);
  CHECK(j["manifold"]["F"][1]["b"] == 3);
}

TEST_CASE("the non-flat n = 3 fixture classifies hyperbolic and certification refuses") {
  const std::string text = read("nonflat_fixture.json");
  CHECK(parse_manifest(text).valid());
  const json c = run_json(text, "classify");
  CHECK(c["result"]["kind"] == "hyperbolic");
  CHECK(c["exit_code"] == 0);
  for (const char* cmd : {"certify-radius", "certify-flat", "kallin-m3"}) {
    const json r = run_json(text, cmd);
    CHECK(r["verdict"] == "not-certified");
    CHECK(r["exit_code"] == 1);
  }
  const json flat = run_json(text, "certify-flat");
  CHECK(flat["diagnostics"][0] == "spec is not flat");
  CHECK(flat["diagnostics"][1] == "F is not order-two-in-w");
}

TEST_CASE("certify-radius on the cubic") {
  const json r = run_json(read("cubic.json"), "certify-radius");
  CHECK(r["verdict"] == "certified");
  CHECK(r["exit_code"] == 0);
  CHECK(r["result"]["r"].get<double>() == doctest::Approx(1.0173e-5).epsilon(1e-4));
  CHECK(r["result"]["threshold"].get<double>() == 1.0 / 16384.0);
  CHECK(r["tolerances"]["locus_residual"] == 1e-12);
  CHECK(r["manifest_fingerprint"].get<std::string>().size() == 16);
  CHECK(r["tool_version"] == kToolVersion);
  CHECK_FALSE(r.contains("timing"));
}

TEST_CASE("certify-flat on an elliptic origin") {
  const json r = run_json(
      R"({"version":1,"manifold":{"n":3,"gamma":0.3,"flat":true,"F":[],"f":[[{"a":[2],"b":0,"c":0,"re":1}]],"domain":{"T":1,"R":1}}})",
      "certify-flat");
  CHECK(r["exit_code"] == 1);
  CHECK(r["diagnostics"][0] == "non-hyperbolic origin slice");
}

TEST_CASE("certify-flat fixture report") {
  RunOptions o;
  o.t_grid = 21;
  const Report rep = run_command_text(read("flat_fixture.json"), "certify-flat", o);
  const json r = json::parse(rep.json);
  CHECK(r["verdict"] == "certified");
  CHECK(r["result"]["T_star"] == 1.0);
  CHECK(r["result"]["r_star"] == std::ldexp(1.0, -17));
  CHECK(r["result"]["slices"].size() == 21);
  CHECK(rep.csv.rfind("t1,re_eta,im_eta,gamma_t,threshold,g_hat_c2,margin,in_box\n", 0) == 0);
}

TEST_CASE("hull-probe is evidence-only with exit 0") {
  for (const char* name : {"elliptic.json", "hyperbolic_probe.json", "quadric.json", "flat_fixture.json"}) {
    const json r = run_json(read(name), "hull-probe");
    CHECK(r["verdict"] == "evidence-only");
    CHECK(r["exit_code"] == 0);
  }
  const json h = run_json(read("hyperbolic_probe.json"), "hull-probe");
  CHECK(h["result"]["cloud"]["points"] == 129);
  CHECK(h["result"]["probes"][0]["ratio"].get<double>() <= 0.9);
}

TEST_CASE("flags override manifest run values and are recorded") {
  RunOptions o;
  o.grid_radial = 4;
  o.grid_angular = 8;
  o.degree = 2;
  const json r = run_json(read("hyperbolic_probe.json"), "hull-probe", o);
  CHECK(r["parameters"]["grid"] == "4x8");
  CHECK(r["parameters"]["degree"] == 2);
  CHECK(r["result"]["cloud"]["points"] == 33);
}

TEST_CASE("bad run parameters are invalid input") {
  const json r = run_json(
      R"({"version":1,"manifold":{"n":2,"gamma":1,"F":[],"domain":{"R":1}},"run":{"grid":"32by64"}})", "kallin-m2");
  CHECK(r["verdict"] == "invalid-input");
  CHECK(r["diagnostics"][0].get<std::string>().find("$.run.grid") != std::string::npos);
  const json u = run_json(kMinimal, "no-such-command");
  CHECK(u["exit_code"] == 2);
  const json s = run_json("{not json", "classify");
  CHECK(s["exit_code"] == 2);
  CHECK(s["manifest_fingerprint"].is_null());
}

TEST_CASE("reports are byte-identical across runs") {
  for (const std::string& cmd : command_names()) {
    for (const char* name : {"cubic.json", "sheets.json", "flat_fixture.json"}) {
      const std::string text = read(name);
      RunOptions o;
      o.seed = 5;
      const Report a = run_command_text(text, cmd, o);
      const Report b = run_command_text(text, cmd, o);
      CHECK(a.json == b.json);
      CHECK(a.csv == b.csv);
    }
  }
}

TEST_CASE("timing appears only on request") {
  RunOptions o;
  o.timing = true;
  CHECK(run_json(kMinimal, "classify", o).contains("timing"));
  CHECK_FALSE(run_json(kMinimal, "classify").contains("timing"));
}

TEST_CASE("kallin-m2 csv columns") {
  RunOptions o;
  o.grid_radial = 2;
  o.grid_angular = 4;
  const Report rep = run_command_text(kMinimal, "kallin-m2", o);
  std::istringstream in(rep.csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "re_zeta,im_zeta,re_psi_s1,re_psi_s2");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 9);
}
