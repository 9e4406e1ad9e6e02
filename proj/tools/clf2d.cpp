#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>

#include "CLI11.hpp"

#include "clf2d/cli.hpp"
#include "clf2d/errors.hpp"

namespace {

using namespace clf2d::cli;

template <class T>
void set_if(std::optional<T>& dst, CLI::Option* opt, const T& value) {
  if (opt->count() > 0) dst = value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clf2d: control Lyapunov functions for 2D single-input bilinear systems"};
  app.require_subcommand(1);

  std::string config_path;
  std::string report_path;
  std::string from_report;
  std::string out_dir = ".";
  double tol_def = 0, p1max = 0, p2max = 0, dt = 0, T = 0, p11 = 0, p12 = 0, p22 = 0;
  int steps = 0;

  struct Flags {
    CLI::Option *tol_def, *p1max, *p2max, *steps, *dt, *T, *p11, *p12, *p22, *from_report;
  };
  std::map<std::string, Flags> flags;

  const std::pair<const char*, const char*> commands[] = {
      {"analyze", "controllability, stability and normal form"},
      {"design", "search for a certified P"},
      {"verify", "certify a given P"},
      {"simulate", "integrate the closed loop"}};
  for (const auto& [name, about] : commands) {
    CLI::App* sub = app.add_subcommand(name, about);
    sub->add_option("config", config_path, "system config (JSON)")->required();
    sub->add_option("--report", report_path, "report path (default <config stem>.<command>.json)");
    Flags f{};
    f.tol_def = sub->add_option("--tol-def", tol_def, "definiteness tolerance");
    f.p1max = sub->add_option("--grid-p1max", p1max, "grid bound on p1");
    f.p2max = sub->add_option("--grid-p2max", p2max, "grid bound on p2");
    f.steps = sub->add_option("--grid-steps", steps, "grid points per axis");
    f.dt = sub->add_option("--dt", dt, "integration step");
    f.T = sub->add_option("--T", T, "final time");
    f.p11 = sub->add_option("--p11", p11, "P entry (1,1)");
    f.p12 = sub->add_option("--p12", p12, "P entry (1,2)");
    f.p22 = sub->add_option("--p22", p22, "P entry (2,2)");
    f.from_report = sub->add_option("--from-report", from_report, "take P from a report");
    sub->add_option("--out", out_dir, "directory for trajectory CSV files");
    flags[name] = f;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalidInput;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const Flags& f = flags[command];
  CommandOptions opt;
  set_if(opt.tol_def, f.tol_def, tol_def);
  set_if(opt.grid_p1_max, f.p1max, p1max);
  set_if(opt.grid_p2_max, f.p2max, p2max);
  set_if(opt.grid_steps, f.steps, steps);
  set_if(opt.dt, f.dt, dt);
  set_if(opt.T, f.T, T);
  set_if(opt.p11, f.p11, p11);
  set_if(opt.p12, f.p12, p12);
  set_if(opt.p22, f.p22, p22);
  if (f.from_report->count() > 0) opt.from_report = from_report;
  opt.out_dir = out_dir;

  try {
    const SystemConfig cfg = load_config(config_path);
    CommandResult res;
    if (command == "analyze") {
      res = run_analyze(cfg, opt);
    } else if (command == "design") {
      res = run_design(cfg, opt);
    } else if (command == "verify") {
      res = run_verify(cfg, opt);
    } else {
      res = run_simulate(cfg, opt);
    }
    std::cout << res.text;
    if (report_path.empty()) {
      report_path = std::filesystem::path(config_path).stem().string() + "." + command + ".json";
    }
    std::ofstream out(report_path, std::ios::binary);
    out << res.report.dump(2) << "\n";
    if (!out) {
      std::cerr << "error: cannot write " << report_path << "\n";
      return kInvalidInput;
    }
    return res.exit_code;
  } catch (const ConfigError& e) {
    if (e.line() > 0) {
      std::cerr << config_path << ":" << e.line() << ": " << e.what() << "\n";
    } else {
      std::cerr << "error: " << e.what() << "\n";
    }
    return kInvalidInput;
  } catch (const clf2d::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
}
