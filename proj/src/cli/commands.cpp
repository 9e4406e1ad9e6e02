#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "clf2d/cli.hpp"
#include "clf2d/errors.hpp"

namespace clf2d::cli {
namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string show(const Mat2& m) {
  return "[[" + num(m.m11) + ", " + num(m.m12) + "], [" + num(m.m21) + ", " + num(m.m22) + "]]";
}

std::string show(Vec2 v) { return "(" + num(v.v1) + ", " + num(v.v2) + ")"; }

std::string show(const Polynomial& p, const char* var = "t") {
  std::string out;
  for (int i = p.degree(); i >= 0; --i) {
    const double c = p[i];
    if (c == 0.0 && !(p.is_zero() && i == 0)) continue;
    if (!out.empty()) out += c < 0.0 ? " - " : " + ";
    else if (c < 0.0) out += "-";
    out += num(std::fabs(c));
    if (i >= 1) out += std::string("*") + var;
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out;
}

GridOptions grid_for(const SystemConfig& cfg, const CommandOptions& opt) {
  GridOptions g = cfg.grid;
  if (opt.grid_p1_max) g.p1_max = *opt.grid_p1_max;
  if (opt.grid_p2_max) g.p2_max = *opt.grid_p2_max;
  if (opt.grid_steps) g.steps = *opt.grid_steps;
  if (!(g.p1_max > 0.0) || !(g.p2_max > 0.0) || g.steps < 2) {
    throw ConfigError(0, "grid needs p1max > 0, p2max > 0 and steps >= 2");
  }
  return g;
}

VerifyOptions verify_for(const SystemConfig& cfg, const CommandOptions& opt) {
  VerifyOptions v;
  v.definiteness_tol = opt.tol_def.value_or(cfg.tol_def);
  if (!(v.definiteness_tol > 0.0)) throw ConfigError(0, "--tol-def must be positive");
  return v;
}

json input_json(const BilinearSystem2D& sys) {
  return {{"A", to_json(sys.A)}, {"N", to_json(sys.N)}, {"b", to_json(sys.b)}};
}

json normal_form_json(const NormalFormSystem& nf) {
  return {{"convention", "x = T z"},
          {"T", to_json(nf.T)},
          {"T_inv", to_json(nf.T_inv)},
          {"a0", nf.a0},
          {"a1", nf.a1},
          {"A", to_json(nf.system.A)},
          {"N", to_json(nf.system.N)},
          {"b", to_json(nf.system.b)}};
}

void append_outcome_text(std::ostringstream& os, const VerificationOutcome& outcome) {
  if (outcome.certified()) {
    const Certificate& c = outcome.certificate();
    os << "verification: CERTIFIED (M is " << to_string(c.classification)
       << (c.vacuous ? ", vacuous" : "") << ")\n";
    for (size_t i = 0; i < c.branches.size(); ++i) {
      const BranchCertificate& b = c.branches[i];
      os << "  branch " << i << " [" << to_string(b.kind) << "]: x(t) = (" << show(b.branch.x1)
         << ", " << show(b.branch.x2) << ") / (" << show(b.branch.denominator) << ")\n";
      os << "    Z(t) = " << show(b.numerator) << "\n";
      os << "    deflated = " << show(b.deflated) << "  (origin at t =";
      for (double t0 : b.origin_params) os << " " << num(t0);
      if (b.origin_params.empty()) os << " none";
      os << ")\n";
    }
    for (size_t i = 0; i < c.missed_points.size(); ++i) {
      os << "  missed point " << show(c.missed_points[i]) << ": Y = "
         << num(c.missed_point_values[i]) << "\n";
    }
  } else {
    const Violation& v = outcome.violation();
    os << "verification: VIOLATION (M is " << to_string(v.classification) << "): " << v.reason
       << "\n";
    os << "  witness x* = " << show(v.witness) << ", q(x*) = " << num(v.q_value)
       << ", Y(x*) = " << num(v.y_value) << "\n";
  }
}

void append_gutman_text(std::ostringstream& os, const json& coeffs) {
  os << "Gutman law: u = -alpha * (" << num(coeffs["x1^2"]) << "*x1^2 + " << num(coeffs["x1x2"])
     << "*x1*x2 + " << num(coeffs["x2^2"]) << "*x2^2 + " << num(coeffs["x1"]) << "*x1 + "
     << num(coeffs["x2"]) << "*x2)\n";
}

std::optional<Mat2> p_from_flags(const CommandOptions& opt) {
  if (!opt.p11 && !opt.p12 && !opt.p22) return std::nullopt;
  if (!opt.p11 || !opt.p12 || !opt.p22) {
    throw ConfigError(0, "--p11, --p12 and --p22 must be given together");
  }
  return Mat2{*opt.p11, *opt.p12, *opt.p12, *opt.p22};
}

bool positive_definite(const Mat2& p, double tol) {
  try {
    return classify_definiteness(p, tol) == Definiteness::kPositiveDefinite;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

json to_json(const Mat2& m) { return json::array({{m.m11, m.m12}, {m.m21, m.m22}}); }
json to_json(Vec2 v) { return json::array({v.v1, v.v2}); }
json to_json(const Polynomial& p) {
  return json(std::vector<double>(p.coeffs().begin(), p.coeffs().end()));
}

json to_json(const VerificationOutcome& outcome) {
  json j;
  j["certified"] = outcome.certified();
  if (outcome.certified()) {
    const Certificate& c = outcome.certificate();
    j["classification"] = std::string(to_string(c.classification));
    j["vacuous"] = c.vacuous;
    j["branches"] = json::array();
    for (const BranchCertificate& b : c.branches) {
      j["branches"].push_back({{"kind", std::string(to_string(b.kind))},
                               {"x1", to_json(b.branch.x1)},
                               {"x2", to_json(b.branch.x2)},
                               {"denominator", to_json(b.branch.denominator)},
                               {"excludes_zero", b.branch.excludes_zero},
                               {"numerator", to_json(b.numerator)},
                               {"origin_params", b.origin_params},
                               {"deflated", to_json(b.deflated)},
                               {"deflated_real_roots", b.deflated_real_roots},
                               {"deflated_at_zero", b.deflated_at_zero}});
    }
    j["missed_points"] = json::array();
    for (size_t i = 0; i < c.missed_points.size(); ++i) {
      j["missed_points"].push_back(
          {{"x", to_json(c.missed_points[i])}, {"Y", c.missed_point_values[i]}});
    }
  } else {
    const Violation& v = outcome.violation();
    j["classification"] = std::string(to_string(v.classification));
    j["witness"] = to_json(v.witness);
    j["q"] = v.q_value;
    j["Y"] = v.y_value;
    j["branch_index"] = v.branch_index;
    j["reason"] = v.reason;
  }
  return j;
}

json gutman_coefficients(const BilinearSystem2D& sys, const Mat2& P) {
  const Mat2 np = sys.N.transpose() * P;
  const Vec2 pb = P * sys.b;
  return {{"x1^2", np.m11}, {"x1x2", np.m12 + np.m21}, {"x2^2", np.m22},
          {"x1", pb.v1},    {"x2", pb.v2}};
}

json conic_coefficients(const BilinearSystem2D& sys, const Mat2& P) {
  const Mat2 np = lyapunov_form(sys.N, P);
  const Vec2 pb = P * sys.b;
  return {{"x1^2", np.m11}, {"x1x2", np.m12 + np.m21}, {"x2^2", np.m22},
          {"x1", 2.0 * pb.v1}, {"x2", 2.0 * pb.v2}};
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t,x1,x2,u,V\n";
  char buf[160];
  for (const TrajectorySample& s : traj.samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.x.v1, s.x.v2, s.u,
                  s.V);
    out += buf;
  }
  return out;
}

CommandResult run_analyze(const SystemConfig& cfg, const CommandOptions& opt) {
  const VerifyOptions vopt = verify_for(cfg, opt);
  const BilinearSystem2D& sys = cfg.system;
  CommandResult res;
  json& r = res.report;
  std::ostringstream os;

  r["command"] = "analyze";
  r["input"] = input_json(sys);
  const bool controllable = is_controllable(sys);
  const CharCoeffs cc = char_coeffs(sys.A);
  const bool stable = is_asymptotically_stable(cc.a0, cc.a1);
  r["controllable"] = controllable;
  r["design_enabled"] = controllable;
  r["a0"] = cc.a0;
  r["a1"] = cc.a1;
  r["asymptotically_stable"] = stable;
  os << "controllable: " << (controllable ? "yes" : "no (design disabled)") << "\n";
  os << "characteristic polynomial: s^2 + " << num(cc.a1) << "*s + " << num(cc.a0) << "\n";
  os << "a0 = " << num(cc.a0) << ", a1 = " << num(cc.a1) << ": "
     << (stable ? "asymptotically stable" : "not asymptotically stable") << "\n";
  if (controllable) {
    const NormalFormSystem nf = to_controller_normal_form(sys);
    r["normal_form"] = normal_form_json(nf);
    os << "normal form (x = T z): T = " << show(nf.T) << ", N_z = " << show(nf.system.N) << "\n";
  }
  // Preview of the conic for P = identity.
  const Mat2 n_p = lyapunov_form(sys.N, Mat2::identity());
  const Definiteness def = classify_definiteness(n_p, vopt.definiteness_tol);
  const ConicDescription conic = describe_conic(n_p, sys.b, vopt.definiteness_tol);
  r["preview_identity_P"] = {{"N_p", to_json(n_p)},
                             {"N_p_definiteness", std::string(to_string(def))},
                             {"M_classification", std::string(to_string(conic.classification))}};
  os << "preview (P = I): N_p = " << show(n_p) << " is " << to_string(def) << ", M is "
     << to_string(conic.classification) << "\n";
  r["exit_status"] = kOk;
  res.exit_code = kOk;
  res.text = os.str();
  return res;
}

CommandResult run_design(const SystemConfig& cfg, const CommandOptions& opt) {
  const GridOptions grid = grid_for(cfg, opt);
  const VerifyOptions vopt = verify_for(cfg, opt);
  const BilinearSystem2D& sys = cfg.system;
  CommandResult res;
  json& r = res.report;
  std::ostringstream os;
  r["command"] = "design";
  r["input"] = input_json(sys);
  if (!is_controllable(sys)) {
    throw ConfigError(0, "pair (A, b) is not controllable; design needs a controllable system");
  }
  const NormalFormSystem nf = to_controller_normal_form(sys);
  r["normal_form"] = normal_form_json(nf);
  os << "normal form (x = T z): T = " << show(nf.T) << ", a0 = " << num(nf.a0)
     << ", a1 = " << num(nf.a1) << "\n";

  const DesignReport design = flow_design(nf, grid, vopt);
  r["branch"] = design.branch;
  r["candidates_tried"] = design.candidates_tried;
  r["transcript"] = json::array();
  int step = 1;
  for (const TranscriptEntry& e : design.transcript) {
    r["transcript"].push_back({{"question", e.question}, {"answer", e.answer}});
    os << step++ << ". " << e.question << " " << e.answer << "\n";
  }
  json diag = json::object();
  for (const auto& [k, v] : design.diagnostics) diag[k] = v;
  r["diagnostics"] = diag;

  if (!design.found()) {
    r["P"] = nullptr;
    r["exit_status"] = kNoCandidate;
    os << "no certified P found (" << design.candidates_tried << " candidates tried)\n";
    res.exit_code = kNoCandidate;
    res.text = os.str();
    return res;
  }
  const PCandidate& c = *design.candidate;
  const Mat2 p_orig = lyapunov_matrix_to_original(nf, c.P());
  r["p1"] = c.p1;
  r["p2"] = c.p2;
  r["P_normal"] = to_json(c.P());
  r["P"] = to_json(p_orig);
  r["verification"] = to_json(*design.outcome);
  r["verification"]["coordinates"] = "normal_form";
  r["M_polynomial"] = conic_coefficients(sys, p_orig);
  r["control_law"] = {{"gutman", {{"u", "-alpha*(N x + b)^T P x"},
                                   {"coefficients", gutman_coefficients(sys, p_orig)}}},
                      {"sontag", {{"u", "-(a + sqrt(a^2 + beta^4))/beta, a = x^T A_p x, "
                                        "beta = 2 (N x + b)^T P x"}}}};
  os << step << ". Compute the control law.\n";
  os << "P (normal form) = " << show(c.P()) << "\nP = " << show(p_orig) << "\n";
  append_outcome_text(os, *design.outcome);
  append_gutman_text(os, r["control_law"]["gutman"]["coefficients"]);
  r["exit_status"] = kOk;
  res.exit_code = kOk;
  res.text = os.str();
  return res;
}

CommandResult run_verify(const SystemConfig& cfg, const CommandOptions& opt) {
  const VerifyOptions vopt = verify_for(cfg, opt);
  std::optional<Mat2> p = p_from_flags(opt);
  if (!p && opt.from_report) p = p_from_report(*opt.from_report);
  if (!p) throw ConfigError(0, "verify needs --p11/--p12/--p22 or --from-report");
  if (!positive_definite(*p, vopt.definiteness_tol)) {
    throw ConfigError(0, "P = " + show(*p) + " is not symmetric positive definite");
  }
  const BilinearSystem2D& sys = cfg.system;
  CommandResult res;
  json& r = res.report;
  std::ostringstream os;
  r["command"] = "verify";
  r["input"] = input_json(sys);
  r["P"] = to_json(*p);
  const LyapunovForms forms = build_Ap_Np(sys, *p);
  r["A_p"] = to_json(forms.A_p);
  r["N_p"] = to_json(forms.N_p);
  r["M_polynomial"] = conic_coefficients(sys, *p);
  const VerificationOutcome outcome = verify_clf(sys, *p, vopt);
  r["verification"] = to_json(outcome);
  r["verification"]["coordinates"] = "input";
  os << "P = " << show(*p) << "\nA_p = " << show(forms.A_p) << "\nN_p = " << show(forms.N_p)
     << "\n";
  append_outcome_text(os, outcome);
  if (outcome.certified()) {
    r["control_law"] = {{"gutman", {{"coefficients", gutman_coefficients(sys, *p)}}}};
    append_gutman_text(os, r["control_law"]["gutman"]["coefficients"]);
  }
  res.exit_code = outcome.certified() ? kOk : kViolation;
  r["exit_status"] = res.exit_code;
  res.text = os.str();
  return res;
}

CommandResult run_simulate(const SystemConfig& cfg, const CommandOptions& opt) {
  SimulationBlock sim = cfg.simulate.value_or(SimulationBlock{});
  if (opt.dt) sim.dt = *opt.dt;
  if (opt.T) sim.T = *opt.T;
  if (!(sim.dt > 0.0) || !(sim.T >= sim.dt)) {
    throw ConfigError(0, "simulation needs dt > 0 and T >= dt");
  }
  const BilinearSystem2D& sys = cfg.system;
  CommandResult res;
  json& r = res.report;
  std::ostringstream os;
  r["command"] = "simulate";
  r["input"] = input_json(sys);

  std::optional<Mat2> p = p_from_flags(opt);
  std::string p_source = "flags";
  if (!p && opt.from_report) {
    p = p_from_report(*opt.from_report);
    p_source = "report";
  }
  if (!p && sim.P) {
    p = sim.P;
    p_source = "config";
  }
  if (!p) {
    CommandResult design = run_design(cfg, opt);
    if (design.exit_code != kOk) {
      design.text += "simulation skipped: no certified P\n";
      return design;
    }
    const json& pj = design.report["P"];
    p = Mat2{pj[0][0].get<double>(), pj[0][1].get<double>(), pj[1][0].get<double>(),
             pj[1][1].get<double>()};
    p_source = "design";
  }
  r["P"] = to_json(*p);
  r["P_source"] = p_source;

  ControlLaw law;
  law.P = *p;
  std::string law_name;
  switch (sim.law) {
    case LawKind::kGutman:
      law.kind = GutmanLaw{sim.alpha};
      law_name = "gutman";
      break;
    case LawKind::kSontag:
      law.kind = SontagLaw{};
      law_name = "sontag";
      break;
    case LawKind::kOpen:
      law.kind = OpenLoop{sim.u};
      law_name = "open";
      break;
  }
  try {
    law.validate();
  } catch (const Error& e) {
    throw ConfigError(0, e.what());
  }
  r["law"] = {{"kind", law_name}, {"alpha", sim.alpha}, {"u", sim.u}};
  r["dt"] = sim.dt;
  r["T"] = sim.T;
  r["trajectories"] = json::array();
  os << "law: " << law_name << ", P = " << show(*p) << " (" << p_source << "), dt = "
     << num(sim.dt) << ", T = " << num(sim.T) << "\n";

  std::filesystem::create_directories(opt.out_dir);
  for (size_t k = 0; k < sim.x0.size(); ++k) {
    const Vec2 x0 = sim.x0[k];
    Trajectory traj;
    try {
      traj = simulate(sys, law, x0, sim.dt, sim.T, *p);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kDiverged) throw;
      r["trajectories"].push_back({{"x0", to_json(x0)}, {"diverged", true}});
      os << "x0 = " << show(x0) << ": DIVERGED (" << e.what() << ")\n";
      res.exit_code = kDiverged;
      r["exit_status"] = res.exit_code;
      res.text = os.str();
      return res;
    }
    const std::filesystem::path csv = opt.out_dir / ("trajectory_" + std::to_string(k) + ".csv");
    std::ofstream out(csv, std::ios::binary);
    out << trajectory_csv(traj);
    const MonotoneCheck mono = lyapunov_monotone(traj, *p, 1e-3);
    const double final_norm = norm(traj.samples.back().x);
    json entry = {{"x0", to_json(x0)},
                  {"csv", csv.string()},
                  {"samples", traj.samples.size()},
                  {"final_x", to_json(traj.samples.back().x)},
                  {"final_norm", final_norm},
                  {"V_monotone", mono.monotone}};
    if (mono.first_violation) entry["first_violation_index"] = *mono.first_violation;
    r["trajectories"].push_back(entry);
    os << "x0 = " << show(x0) << ": |x(T)| = " << num(final_norm)
       << ", V monotone outside |x| = 1e-3: " << (mono.monotone ? "yes" : "no") << " -> "
       << csv.string() << "\n";
  }
  if (sim.x0.empty()) os << "no initial conditions; nothing simulated\n";
  res.exit_code = kOk;
  r["exit_status"] = kOk;
  res.text = os.str();
  return res;
}

}  // namespace clf2d::cli
