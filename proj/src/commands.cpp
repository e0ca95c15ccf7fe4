#include "crhull/commands.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "crhull/certify.hpp"
#include "crhull/error.hpp"
#include "crhull/hull.hpp"
#include "crhull/normalform.hpp"
#include "crhull/numerics.hpp"
#include "crhull/singular.hpp"

namespace crhull {

namespace {

using nlohmann::json;

struct Outcome {
  Verdict verdict = Verdict::EvidenceOnly;
  json parameters = json::object();
  json result = json::object();
  std::vector<std::string> diagnostics;
  std::string csv;
};

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }
json complex_json(Complex c) { return json::array({number(c.real()), number(c.imag())}); }

json tolerances() {
  return {{"locus_residual", kLocusTolerance},
          {"newton_max_iterations", kMaxNewtonIterations},
          {"singular_jacobian", kSingularJacobian},
          {"parabolic_band", kParabolicBand},
          {"degenerate_beta11", kDegenerateBeta11},
          {"off_locus", kOffLocusTolerance}};
}

// Flags win over manifest "run" values, which win over defaults.
class Params {
 public:
  Params(const json& run, const RunOptions& o, json& record) : run_(run), opt_(o), record_(record) {}

  int integer(const char* key, std::optional<int> flag, int fallback) {
    int v = fallback;
    if (flag)
      v = *flag;
    else if (run_.contains(key)) {
      if (!run_[key].is_number_integer()) bad(key, "expected an integer");
      v = run_[key].get<int>();
    }
    record_[key] = v;
    return v;
  }

  double real(const char* key, std::optional<double> flag, double fallback) {
    double v = fallback;
    if (flag)
      v = *flag;
    else if (run_.contains(key)) {
      if (!run_[key].is_number()) bad(key, "expected a number");
      v = run_[key].get<double>();
    }
    record_[key] = v;
    return v;
  }

  std::uint64_t seed() {
    std::uint64_t v = 0;
    if (opt_.seed)
      v = *opt_.seed;
    else if (run_.contains("seed")) {
      if (!run_["seed"].is_number_unsigned()) bad("seed", "expected a non-negative integer");
      v = run_["seed"].get<std::uint64_t>();
    }
    record_["seed"] = v;
    return v;
  }

  std::pair<int, int> grid(int nr, int na) {
    if (opt_.grid_radial && opt_.grid_angular) {
      nr = *opt_.grid_radial;
      na = *opt_.grid_angular;
    } else if (run_.contains("grid")) {
      const json& g = run_["grid"];
      if (!g.is_string()) bad("grid", "expected \"NRxNA\"");
      const std::string s = g.get<std::string>();
      const auto x = s.find('x');
      try {
        if (x == std::string::npos) throw std::invalid_argument(s);
        std::size_t used = 0;
        nr = std::stoi(s.substr(0, x), &used);
        if (used != x) throw std::invalid_argument(s);
        na = std::stoi(s.substr(x + 1), &used);
        if (used != s.size() - x - 1) throw std::invalid_argument(s);
      } catch (const std::exception&) {
        bad("grid", "expected \"NRxNA\"");
      }
    }
    record_["grid"] = std::to_string(nr) + "x" + std::to_string(na);
    return {nr, na};
  }

  std::vector<double> slice_t(std::size_t arity) {
    std::vector<double> t(arity, 0.0);
    if (run_.contains("t")) {
      const json& j = run_["t"];
      if (!j.is_array() || j.size() != arity) bad("t", "expected " + std::to_string(arity) + " numbers");
      for (std::size_t i = 0; i < arity; ++i) {
        if (!j[i].is_number()) bad("t", "expected numbers");
        t[i] = j[i].get<double>();
      }
    }
    record_["t"] = t;
    return t;
  }

  bool has(const char* key) const { return run_.contains(key); }
  const json& raw(const char* key) const { return run_[key]; }

  [[noreturn]] static void bad(const std::string& key, const std::string& what) {
    throw Error(ErrorCode::Schema, "$.run." + key + ": " + what);
  }

 private:
  const json& run_;
  const RunOptions& opt_;
  json& record_;
};

std::string csv_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string csv_row(const std::vector<double>& values) {
  std::string row;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) row += ',';
    row += csv_number(values[i]);
  }
  return row + '\n';
}

std::string t_header(std::size_t arity) {
  std::string h;
  for (std::size_t i = 0; i < arity; ++i) h += "t" + std::to_string(i + 1) + ",";
  return h;
}

void refuse(Outcome& out, std::string why) {
  out.verdict = Verdict::NotCertified;
  out.diagnostics.push_back(std::move(why));
}

// ---- commands -------------------------------------------------------------

Outcome cmd_classify(const Manifest& m, Params& p) {
  Outcome out;
  const ManifoldSpec& s = m.spec;
  const auto t = p.slice_t(s.t_arity());
  const EtaSolution sol = locate_eta(s, t, {});
  out.result["eta"] = complex_json(sol.eta);
  out.result["locus"] = {{"converged", sol.converged},
                         {"residual", sol.residual},
                         {"iterations", sol.iterations},
                         {"jacobian_det", sol.jacobian_det},
                         {"nondegeneracy_warning", sol.nondegeneracy_warning}};
  if (!sol.converged) {
    refuse(out, "complex point did not converge");
    return out;
  }
  const Classification c = classify_point(jet_at(s, t, sol.eta));
  out.result["kind"] = to_string(c.kind);
  out.result["gamma_t"] = number(c.gamma_t);
  out.result["beta11"] = complex_json(c.beta11);
  out.result["beta02"] = complex_json(c.beta02);
  return out;
}

Outcome cmd_locus(const Manifest& m, Params& p, const RunOptions& o) {
  Outcome out;
  const ManifoldSpec& s = m.spec;
  const int count = p.integer("t_grid", o.t_grid, 11);
  const SingularLocus locus = trace_locus(s, uniform_t_grid(s.t_arity(), s.T, count));
  json points = json::array();
  std::size_t converged = 0;
  out.csv = t_header(s.t_arity()) + "re_eta,im_eta,converged\n";
  for (std::size_t i = 0; i < locus.t_grid.size(); ++i) {
    points.push_back({{"t", locus.t_grid[i]},
                      {"eta", complex_json(locus.eta[i])},
                      {"converged", static_cast<bool>(locus.converged[i])},
                      {"residual", locus.residuals[i]}});
    converged += locus.converged[i] ? 1 : 0;
    std::vector<double> row = locus.t_grid[i];
    row.push_back(locus.eta[i].real());
    row.push_back(locus.eta[i].imag());
    row.push_back(locus.converged[i] ? 1.0 : 0.0);
    out.csv += csv_row(row);
  }
  out.result = {{"points", points},
                {"count", locus.t_grid.size()},
                {"converged_count", converged},
                {"all_converged", locus.all_converged()},
                {"max_residual", locus.max_residual}};
  if (!locus.all_converged()) refuse(out, "locus continuation failed at some grid points");
  return out;
}

Outcome cmd_normalform(const Manifest& m, Params& p) {
  Outcome out;
  const ManifoldSpec& s = m.spec;
  const auto t = p.slice_t(s.t_arity());
  const EtaSolution sol = locate_eta(s, t, {});
  out.result["eta"] = complex_json(sol.eta);
  if (!sol.converged) {
    refuse(out, "complex point did not converge");
    return out;
  }
  const TaylorJet jet = jet_at(s, t, sol.eta);
  const SliceNormalForm nf = reduce(jet);
  const Classification c = classify_point(jet);
  json log = json::array();
  for (const CoordinateChange& step : nf.change_log)
    log.push_back({{"step", to_string(step.kind)},
                   {"value", complex_json(step.value)},
                   {"linear", complex_json(step.linear)}});
  out.result["kind"] = to_string(c.kind);
  out.result["gamma_t"] = nf.gamma_t;
  out.result["theta"] = nf.theta;
  out.result["beta11"] = complex_json(nf.beta11);
  out.result["g_hat"] = terms_to_json(nf.g_hat);
  out.result["change_log"] = log;
  out.result["threshold"] = nf.gamma_t > 0.5 ? json(normal_form_threshold(nf.gamma_t)) : json(nullptr);
  return out;
}

Outcome cmd_certify_radius(const Manifest& m, Params&) {
  Outcome out;
  const ManifoldSpec& s = m.spec;
  if (s.n != 2) {
    refuse(out, "certify-radius needs n = 2; use certify-flat for flat families");
    if (!order_two_in_w(s.F)) out.diagnostics.push_back("F is not order-two-in-w");
    if (!s.flat) out.diagnostics.push_back("spec is not flat");
    return out;
  }
  if (!(s.gamma > 0.5)) {
    refuse(out, "non-hyperbolic origin slice");
    return out;
  }
  const CertifiedRadius cr = certify_radius(s.gamma, s.F, s.R);
  out.result = {{"r", cr.r},
                {"threshold", cr.threshold},
                {"c2_at_r", cr.c2_at_r},
                {"bisection_steps", cr.bisection_steps},
                {"certified", cr.certified},
                {"R", s.R}};
  if (!s.F.is_zero()) out.result["c2_grid_max"] = c2_norm_upper(s.F, cr.r).grid_max;
  out.verdict = cr.certified ? Verdict::Certified : Verdict::NotCertified;
  if (!cr.certified) out.diagnostics.push_back("no radius satisfies the C2 threshold");
  return out;
}

Outcome cmd_certify_flat(const Manifest& m, Params& p, const RunOptions& o) {
  Outcome out;
  const ManifoldSpec& s = m.spec;
  const int count = p.integer("t_grid", o.t_grid, 21);
  if (!s.flat) {
    refuse(out, "spec is not flat");
    if (!order_two_in_w(s.F)) out.diagnostics.push_back("F is not order-two-in-w");
    return out;
  }
  const FlatCertificate fc = certify_flat(s, uniform_t_grid(s.t_arity(), s.T, count));
  json slices = json::array();
  out.csv = t_header(s.t_arity()) + "re_eta,im_eta,gamma_t,threshold,g_hat_c2,margin,in_box\n";
  for (const SliceRecord& r : fc.per_slice) {
    json j = {{"t", r.t},       {"eta", complex_json(r.eta)}, {"ok", r.ok},
              {"in_box", r.in_box}, {"gamma_t", number(r.gamma_t)}, {"hyperbolic", r.hyperbolic},
              {"threshold", r.threshold}, {"g_hat_c2", r.g_hat_c2}, {"margin", r.margin}};
    if (!r.failure.empty()) j["failure"] = r.failure;
    slices.push_back(j);
    std::vector<double> row = r.t;
    for (double v : {r.eta.real(), r.eta.imag(), r.gamma_t, r.threshold, r.g_hat_c2, r.margin,
                     r.in_box ? 1.0 : 0.0})
      row.push_back(v);
    out.csv += csv_row(row);
  }
  out.result = {{"T_star", fc.T_star},
                {"r_star", fc.r_star},
                {"certified", fc.certified},
                {"min_margin", number(fc.certified ? fc.min_margin() : std::nan(""))},
                {"slices", slices}};
  out.diagnostics.insert(out.diagnostics.end(), fc.diagnostics.begin(), fc.diagnostics.end());
  out.verdict = fc.certified ? Verdict::Certified : Verdict::NotCertified;
  return out;
}

// Radius for branch-based commands: run.r when given, otherwise the certified radius.
double branch_radius(const ManifoldSpec& s, const BiPoly& Ft, Params& p) {
  const double fallback = Ft.is_zero() ? s.R : certify_radius(s.gamma, Ft, s.R).r;
  return p.real("r", {}, fallback);
}

Outcome cmd_branches(const Manifest& m, Params& p) {
  Outcome out;
  const ManifoldSpec& s = m.spec;
  const auto t = p.slice_t(s.t_arity());
  const auto [nr, na] = p.grid(32, 64);
  const int pairs = p.integer("pairs", {}, 10000);
  const std::uint64_t seed = p.seed();
  if (!(s.gamma > 0.5)) {
    refuse(out, "non-hyperbolic origin slice");
    return out;
  }
  const BiPoly Ft = s.F.at_t(t);
  const double r = branch_radius(s, Ft, p);
  const DiskGrid grid = DiskGrid::make(r, nr, na);
  double residual = 0.0, forward = 0.0, df = 0.0, dg = 0.0;
  for (Complex z : grid.points) {
    const BranchSolution f = solve_branch_f(s.gamma, Ft, {}, z);
    const BranchSolution g = solve_branch_g(s.gamma, Ft, {}, z);
    residual = std::max({residual, f.residual, g.residual});
    forward = std::max({forward, forward_check(s.gamma, Ft, {}, f, z), forward_check(s.gamma, Ft, {}, g, z)});
    const BranchDerivatives fd = branch_derivatives(s.gamma, Ft, {}, f, z);
    const BranchDerivatives gd = branch_derivatives(s.gamma, Ft, {}, g, z);
    df = std::max({df, std::abs(fd.dz), std::abs(fd.dzbar)});
    dg = std::max({dg, std::abs(gd.dz), std::abs(gd.dzbar)});
  }
  const LipschitzAudit audit = lipschitz_audit(s.gamma, Ft, r, static_cast<std::size_t>(std::max(pairs, 0)), seed);
  out.result = {{"r", r},
                {"points", grid.points.size()},
                {"max_residual", residual},
                {"max_forward_check", forward},
                {"max_abs_f_derivative", df},
                {"max_abs_g_derivative", dg},
                {"lipschitz",
                 {{"alpha", audit.alpha},
                  {"max_ratio", audit.max_ratio},
                  {"pairs", audit.pairs},
                  {"violations", audit.violations}}}};
  if (audit.violations > 0) refuse(out, "Lipschitz audit found violations");
  return out;
}

Outcome cmd_kallin_m2(const Manifest& m, Params& p) {
  Outcome out;
  const ManifoldSpec& s = m.spec;
  const auto t = p.slice_t(s.t_arity());
  const auto [nr, na] = p.grid(32, 64);
  if (!(s.gamma > 0.5)) {
    refuse(out, "non-hyperbolic origin slice");
    return out;
  }
  const BiPoly Ft = s.F.at_t(t);
  const double r = branch_radius(s, Ft, p);
  const DiskGrid grid = DiskGrid::make(r, nr, na);
  const KallinReport rep = kallin_check_m2(s.gamma, Ft, grid);
  const double a = rep.alpha;
  auto psi = [a](Complex z1, Complex z2) { return 0.25 * (z1 * z1 - z2 * z2) + 2.0 * a * z1 * z2; };
  out.csv = "re_zeta,im_zeta,re_psi_s1,re_psi_s2\n";
  for (Complex z : grid.points) {
    const double p1 = psi(z, solve_branch_f(s.gamma, Ft, {}, z).linear_part).real();
    const double p2 = psi(z, solve_branch_g(s.gamma, Ft, {}, z).linear_part).real();
    out.csv += csv_row({z.real(), z.imag(), p1, p2});
  }
  out.result = {{"r", r},
                {"alpha", rep.alpha},
                {"side1_min_margin", number(rep.side1_min_margin)},
                {"side2_min_margin", number(rep.side2_min_margin)},
                {"side1_min_value", number(rep.side1_min_value)},
                {"side2_max_value", number(rep.side2_max_value)},
                {"zero_fiber_ok", rep.zero_fiber_ok},
                {"points", rep.points},
                {"grid", rep.grid}};
  if (!(rep.side1_min_margin > 0.0) || !(rep.side2_min_margin > 0.0) || !rep.zero_fiber_ok)
    refuse(out, "Kallin margins are not positive on the grid");
  return out;
}

Outcome cmd_kallin_m3(const Manifest& m, Params& p, const RunOptions& o) {
  Outcome out;
  const ManifoldSpec& s = m.spec;
  BoxGrid box;
  box.T = p.real("box_T", {}, s.T);
  box.r = p.real("box_r", {}, s.R);
  box.t_count = p.integer("t_grid", o.t_grid, 9);
  const auto [nu, nv] = p.grid(32, 32);
  box.u_count = nu;
  box.v_count = nv;
  if (s.n != 3) {
    refuse(out, "kallin-m3 needs n = 3");
    return out;
  }
  const KallinReport rep = kallin_check_m3(s, box);
  out.result = {{"epsilon", rep.alpha},
                {"v1_min_margin", number(rep.side1_min_margin)},
                {"v2_min_margin", number(rep.side2_min_margin)},
                {"v1_min_re_q", number(rep.side1_min_value)},
                {"v2_max_re_q", number(rep.side2_max_value)},
                {"zero_fiber_ok", rep.zero_fiber_ok},
                {"points", rep.points},
                {"grid", rep.grid}};
  if (!(rep.side1_min_value >= 0.0) || !(rep.side2_max_value <= 0.0) || !rep.zero_fiber_ok)
    refuse(out, "sign contracts fail on the box grid");
  return out;
}

Outcome cmd_hull_probe(const Manifest& m, Params& p, const RunOptions& o) {
  Outcome out;
  const ManifoldSpec& s = m.spec;
  const auto [nr, na] = p.grid(8, 16);
  const int t_count = p.integer("t_grid", o.t_grid, 1);
  const int degree = p.integer("degree", o.degree, 6);
  SeparateOptions so;
  so.tolerance = p.real("tol", o.tol, so.tolerance);
  so.max_iterations = p.integer("max_iterations", {}, so.max_iterations);
  const double radius = p.real("r", {}, s.R);

  std::vector<PointN> queries;
  if (p.has("queries")) {
    const json& qs = p.raw("queries");
    if (!qs.is_array()) Params::bad("queries", "expected an array of points");
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const json& q = qs[i];
      const std::string key = "queries[" + std::to_string(i) + "]";
      if (!q.is_array() || q.size() != static_cast<std::size_t>(s.n))
        Params::bad(key, "expected " + std::to_string(s.n) + " [re, im] pairs");
      PointN pt;
      for (const json& c : q) {
        if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number())
          Params::bad(key, "expected [re, im] pairs");
        pt.emplace_back(c[0].get<double>(), c[1].get<double>());
      }
      queries.push_back(std::move(pt));
    }
  } else {
    queries.emplace_back(static_cast<std::size_t>(s.n), Complex{});
    out.diagnostics.push_back("no queries given; probing the origin");
  }

  SampleCloud cloud = sample_manifold(s, t_count, DiskGrid::make(radius, nr, na));
  cloud.source = fingerprint(m);
  json results = json::array();
  out.csv = "query_index,";
  for (int j = 1; j <= s.n; ++j) out.csv += "re_q" + std::to_string(j) + ",im_q" + std::to_string(j) + ",";
  out.csv += "ratio\n";
  for (std::size_t i = 0; i < queries.size(); ++i) {
    json q = json::array();
    for (Complex c : queries[i]) q.push_back(complex_json(c));
    json entry = {{"query", q}};
    std::vector<double> row{static_cast<double>(i)};
    for (Complex c : queries[i]) {
      row.push_back(c.real());
      row.push_back(c.imag());
    }
    try {
      const SeparationResult r = separate(cloud, queries[i], degree, so);
      entry["ratio"] = r.ratio;
      entry["degree"] = r.degree;
      entry["iterations"] = r.iterations;
      entry["converged"] = r.converged;
      entry["lower_bound"] = r.lower_bound;
      entry["rank"] = r.rank;
      entry["separated"] = r.ratio < 1.0 - 1e-6;
      row.push_back(r.ratio);
    } catch (const Error& e) {
      entry["error"] = std::string(to_string(e.code())) + ": " + e.what();
      row.push_back(std::nan(""));
    }
    results.push_back(entry);
    out.csv += csv_row(row);
  }
  out.result = {{"cloud",
                 {{"points", cloud.points.size()},
                  {"radius", cloud.radius},
                  {"t_count", cloud.t_count},
                  {"radial_count", cloud.radial_count},
                  {"angular_count", cloud.angular_count},
                  {"source", cloud.source}}},
                {"probes", results}};
  return out;
}

using Handler = std::function<Outcome(const Manifest&, Params&, const RunOptions&)>;

const std::map<std::string, Handler, std::less<>>& handlers() {
  static const std::map<std::string, Handler, std::less<>> table = {
      {"classify", [](const Manifest& m, Params& p, const RunOptions&) { return cmd_classify(m, p); }},
      {"locus", cmd_locus},
      {"normalform", [](const Manifest& m, Params& p, const RunOptions&) { return cmd_normalform(m, p); }},
      {"certify-radius", [](const Manifest& m, Params& p, const RunOptions&) { return cmd_certify_radius(m, p); }},
      {"certify-flat", cmd_certify_flat},
      {"branches", [](const Manifest& m, Params& p, const RunOptions&) { return cmd_branches(m, p); }},
      {"kallin-m2", [](const Manifest& m, Params& p, const RunOptions&) { return cmd_kallin_m2(m, p); }},
      {"kallin-m3", cmd_kallin_m3},
      {"hull-probe", cmd_hull_probe},
  };
  return table;
}

Report finish(const std::string& command, const std::string& fp, Outcome out, const RunOptions& o,
              double seconds) {
  json doc = {{"report_version", kReportVersion},
              {"tool_version", kToolVersion},
              {"command", command},
              {"manifest_fingerprint", fp.empty() ? json(nullptr) : json(fp)},
              {"verdict", to_string(out.verdict)},
              {"exit_code", exit_code(out.verdict)},
              {"parameters", out.parameters},
              {"tolerances", tolerances()},
              {"result", out.result},
              {"diagnostics", out.diagnostics}};
  if (o.timing) doc["timing"] = {{"wall_seconds", seconds}};
  return {out.verdict, doc.dump(2) + "\n", std::move(out.csv)};
}

Outcome invalid(std::vector<std::string> diagnostics) {
  Outcome out;
  out.verdict = Verdict::InvalidInput;
  out.diagnostics = std::move(diagnostics);
  return out;
}

}  // namespace

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Certified: return "certified";
    case Verdict::NotCertified: return "not-certified";
    case Verdict::EvidenceOnly: return "evidence-only";
    case Verdict::InvalidInput: return "invalid-input";
  }
  return "invalid-input";
}

int exit_code(Verdict v) noexcept {
  switch (v) {
    case Verdict::Certified:
    case Verdict::EvidenceOnly: return 0;
    case Verdict::NotCertified: return 1;
    case Verdict::InvalidInput: return 2;
  }
  return 2;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, h] : handlers()) v.push_back(k);
    return v;
  }();
  return names;
}

Report run_command(const Manifest& manifest, std::string_view command, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const std::string cmd(command);
  const std::string fp = fingerprint(manifest);
  Outcome out;
  auto it = handlers().find(command);
  if (it == handlers().end()) {
    out = invalid({"unknown command '" + cmd + "'"});
  } else if (!manifest.valid()) {
    out = invalid(manifest.diagnostics);
  } else {
    json parameters = json::object();
    try {
      Params params(manifest.run, options, parameters);
      out = it->second(manifest, params, options);
    } catch (const Error& e) {
      const ErrorCode c = e.code();
      const bool bad_input = c == ErrorCode::Schema || c == ErrorCode::InvalidArgument ||
                             c == ErrorCode::Arity || c == ErrorCode::OutOfDomain;
      out = Outcome{};
      out.verdict = bad_input ? Verdict::InvalidInput : Verdict::NotCertified;
      out.diagnostics.push_back(std::string(to_string(c)) + ": " + e.what());
    } catch (const std::exception& e) {
      out = invalid({std::string("internal: ") + e.what()});
    }
    out.parameters = std::move(parameters);
  }
  // Hull output never certifies and never fails on valid input.
  if (cmd == "hull-probe" && out.verdict == Verdict::NotCertified) out.verdict = Verdict::EvidenceOnly;
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return finish(cmd, fp, std::move(out), options, seconds);
}

Report run_command_text(std::string_view text, std::string_view command, const RunOptions& options) {
  Manifest m;
  try {
    m = parse_manifest(text);
  } catch (const Error& e) {
    return finish(std::string(command), "", invalid({e.what()}), options, 0.0);
  }
  return run_command(m, command, options);
}

}  // namespace crhull
