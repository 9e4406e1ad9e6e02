#pragma once

// Front end shared by the clf2d executable, the acceptance suite and the
// Python module: config ingestion, the four commands and their reports.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "clf2d/control.hpp"
#include "clf2d/design.hpp"
#include "clf2d/sysmodel.hpp"
#include "clf2d/verify.hpp"

namespace clf2d::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidInput = 2,
  kNoCandidate = 3,
  kViolation = 4,
  kDiverged = 5,
};

/// Parse or validation failure, anchored to a line of the config text.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& what) : std::runtime_error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

enum class LawKind { kGutman, kSontag, kOpen };

struct SimulationBlock {
  LawKind law = LawKind::kGutman;
  double alpha = 0.1;
  double u = 0.0;
  std::vector<Vec2> x0 = {{3, 3}, {3, -3}, {-3, 3}, {-3, -3}, {1, 1}, {0, 1}};
  double dt = 1e-3;
  double T = 50.0;
  std::optional<Mat2> P;
};

struct SystemConfig {
  BilinearSystem2D system;
  GridOptions grid;
  double tol_def = kDefaultDefinitenessTol;
  std::optional<SimulationBlock> simulate;
};

/// Throws ConfigError.
SystemConfig parse_config(const std::string& text);
/// Throws ConfigError (line 0 when the file cannot be read).
SystemConfig load_config(const std::filesystem::path& path);

/// Flag overrides; unset fields keep the config / module defaults.
struct CommandOptions {
  std::optional<double> tol_def;
  std::optional<double> grid_p1_max;
  std::optional<double> grid_p2_max;
  std::optional<int> grid_steps;
  std::optional<double> dt;
  std::optional<double> T;
  std::optional<double> p11;
  std::optional<double> p12;
  std::optional<double> p22;
  std::optional<std::filesystem::path> from_report;
  std::filesystem::path out_dir = ".";
};

struct CommandResult {
  int exit_code = kOk;
  nlohmann::json report;
  std::string text;
};

CommandResult run_analyze(const SystemConfig& config, const CommandOptions& options = {});
CommandResult run_design(const SystemConfig& config, const CommandOptions& options = {});
CommandResult run_verify(const SystemConfig& config, const CommandOptions& options = {});
/// Writes trajectory_<k>.csv files into options.out_dir.
CommandResult run_simulate(const SystemConfig& config, const CommandOptions& options = {});

/// Reads "P" from a design or verify report. Throws ConfigError.
Mat2 p_from_report(const std::filesystem::path& path);

nlohmann::json to_json(const Mat2& m);
nlohmann::json to_json(Vec2 v);
nlohmann::json to_json(const Polynomial& p);
nlohmann::json to_json(const VerificationOutcome& outcome);

/// Monomial coefficients of (N x + b)ᵀ P x: x1^2, x1x2, x2^2, x1, x2.
nlohmann::json gutman_coefficients(const BilinearSystem2D& sys, const Mat2& P);
/// Monomial coefficients of q(x) = xᵀ N_p x + 2 xᵀ P b.
nlohmann::json conic_coefficients(const BilinearSystem2D& sys, const Mat2& P);

/// "t,x1,x2,u,V" rows, 17 significant digits, LF line endings.
std::string trajectory_csv(const Trajectory& traj);

}  // namespace clf2d::cli
