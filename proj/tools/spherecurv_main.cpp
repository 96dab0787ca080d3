// Curvature reports, property verification and parameter scans for sphere
// bundles of Euclidean vector bundles with the Sasaki metric.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or parse error.

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "spherecurv/report.hpp"

using namespace spherecurv;

namespace {

int cmd_report(const std::string& file, const std::string& out_path, const RunOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  BoundModel model = bind_model(parse_file(file));
  RunOptions ropts = opts;
  if (ropts.tol == kDefaultTol && model.tol != kDefaultTol) ropts.tol = model.tol;

  Report rep = run_report(model, ropts);
  rep.sections.insert(rep.sections.begin(), {"spherecurv report", {{"file", file}}});

  if (out_path.empty()) {
    rep.write(std::cout);
  } else {
    std::ofstream o(out_path);
    if (!o) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return 2;
    }
    rep.write(o);
  }
  auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cerr << "report completed in " << format_double(dt) << " s\n";
  return 0;
}

int cmd_verify(const std::string& suite, const RunOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  SuiteResult res = run_suite(suite, opts);
  for (const auto& line : res.lines) std::cout << "  " << line << "\n";
  std::cout << (res.pass ? "PASS" : "FAIL") << ": " << suite << " (seed " << opts.seed
            << ", samples " << opts.samples << ")\n";
  auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cerr << "suite completed in " << format_double(dt) << " s\n";
  return res.pass ? 0 : 1;
}

int cmd_scan(const std::string& grid_file, const std::string& out_path) {
  auto t0 = std::chrono::steady_clock::now();
  ScanSpec spec = bind_scan_spec(parse_file(grid_file));
  std::ofstream o(out_path);
  if (!o) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return 2;
  }
  run_scan(spec, o);
  auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cerr << "scan completed in " << format_double(dt) << " s\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sphere-bundle curvature engine"};
  app.require_subcommand(1);

  RunOptions opts;
  std::string file, out_path, suite, grid_file;

  auto* report = app.add_subcommand("report", "curvature report for a model document");
  report->add_option("file", file, "model document")->required();
  report->add_option("--out", out_path, "write the report to a file instead of stdout");
  report->add_option("--samples", opts.samples, "random samples per sampled quantity");
  report->add_option("--seed", opts.seed, "random seed (echoed in the report)");
  report->add_option("--tol", opts.tol, "float-mode comparison tolerance");

  auto* verify = app.add_subcommand("verify", "run a named property suite");
  verify->add_option("suite", suite, "suite name; see --list")->required();
  verify->add_option("--samples", opts.samples, "random samples");
  verify->add_option("--seed", opts.seed, "random seed");
  verify->add_option("--tol", opts.tol, "float-mode comparison tolerance");
  verify->add_option("--model", opts.model_path, "external model document (suites that take one)");

  auto* scan = app.add_subcommand("scan", "evaluate a parameter grid, write CSV");
  scan->add_option("grid", grid_file, "grid specification document")->required();
  scan->add_option("--out", out_path, "output CSV path")->required();

  auto* suites = app.add_subcommand("suites", "list verify suite names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (report->parsed()) return cmd_report(file, out_path, opts);
    if (verify->parsed()) return cmd_verify(suite, opts);
    if (scan->parsed()) return cmd_scan(grid_file, out_path);
    if (suites->parsed()) {
      for (const auto& s : suite_names()) std::cout << s << "\n";
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
