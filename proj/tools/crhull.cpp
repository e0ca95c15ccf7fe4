// crhull <command> --manifest <path> [--out <path>] [--grid NRxNA] [--t-grid N]
//        [--degree D] [--tol T] [--seed S] [--csv <path>] [--timing]
#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "crhull/crhull.h"

namespace {

bool write_file(const std::string& path, const char* text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  return static_cast<bool>(out);
}

bool parse_grid(const std::string& s, int& nr, int& na) {
  const auto x = s.find('x');
  if (x == std::string::npos) return false;
  try {
    std::size_t a = 0, b = 0;
    nr = std::stoi(s.substr(0, x), &a);
    na = std::stoi(s.substr(x + 1), &b);
    return a == x && b == s.size() - x - 1 && nr > 0 && na > 0;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certificates and hull probes for real manifolds with CR singularities", "crhull"};
  app.set_version_flag("--version", crhull_version());

  std::string command, manifest_path, out_path, csv_path, grid;
  int t_grid = 0, degree = 0;
  double tol = 0.0;
  std::uint64_t seed = 0;
  bool timing = false;

  std::string names;
  for (std::size_t i = 0; i < crhull_command_count(); ++i) names += std::string(i ? ", " : "") + crhull_command_name(i);
  app.add_option("command", command, "One of: " + names)->required();
  app.add_option("--manifest", manifest_path, "Manifest file (JSON)")->required();
  app.add_option("--out", out_path, "Write the report here instead of stdout");
  app.add_option("--grid", grid, "Disk grid as NRxNA");
  app.add_option("--t-grid", t_grid, "Points per t-axis")->check(CLI::PositiveNumber);
  app.add_option("--degree", degree, "Separator degree for hull-probe")->check(CLI::Range(1, 10));
  app.add_option("--tol", tol, "Hull-probe convergence tolerance")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "Seed for Monte-Carlo audits (default 0)");
  app.add_option("--csv", csv_path, "Write plot data as CSV");
  app.add_flag("--timing", timing, "Include wall-clock timing (breaks byte-identical reports)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  crhull_run_options options;
  crhull_run_options_init(&options);
  if (!grid.empty() && !parse_grid(grid, options.grid_radial, options.grid_angular)) {
    std::cerr << "crhull: --grid expects NRxNA, got '" << grid << "'\n";
    return 2;
  }
  options.t_grid = t_grid;
  options.degree = degree;
  options.tol = tol;
  options.has_seed = seed_opt->count() > 0;
  options.seed = seed;
  options.timing = timing;

  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) {
    std::cerr << "crhull: cannot read " << manifest_path << "\n";
    return 2;
  }
  std::ostringstream text;
  text << in.rdbuf();
  const std::string body = text.str();

  crhull_report* raw = nullptr;
  if (crhull_run_text(body.data(), body.size(), command.c_str(), &options, &raw) != CRHULL_OK) {
    std::cerr << "crhull: " << crhull_last_error() << "\n";
    return 2;
  }
  std::unique_ptr<crhull_report, decltype(&crhull_report_destroy)> report(raw, crhull_report_destroy);

  if (out_path.empty()) {
    std::fputs(crhull_report_json(report.get()), stdout);
  } else if (!write_file(out_path, crhull_report_json(report.get()))) {
    std::cerr << "crhull: cannot write " << out_path << "\n";
    return 2;
  }
  if (!csv_path.empty()) {
    const char* csv = crhull_report_csv(report.get());
    if (!*csv) std::cerr << "crhull: command '" << command << "' has no CSV output\n";
    if (!write_file(csv_path, csv)) {
      std::cerr << "crhull: cannot write " << csv_path << "\n";
      return 2;
    }
  }
  return crhull_report_exit_code(report.get());
}
