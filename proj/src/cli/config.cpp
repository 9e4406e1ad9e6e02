#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "clf2d/cli.hpp"

namespace clf2d::cli {
namespace {

using nlohmann::json;

// 1-based line of the first occurrence of "key" in the raw text, or 1.
int line_of_key(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  if (pos == std::string::npos) return 1;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
}

int line_of_byte(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

struct Reader {
  const std::string& text;

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(line_of_key(text, key), what);
  }

  double number(const json& v, const std::string& key, const std::string& label) const {
    if (!v.is_number()) fail(key, label + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(key, label + " must be finite");
    return d;
  }

  Vec2 vec2(const json& v, const std::string& key, const std::string& label) const {
    if (!v.is_array() || v.size() != 2) fail(key, label + " must be an array of 2 numbers");
    return {number(v[0], key, label), number(v[1], key, label)};
  }

  Mat2 mat2(const json& v, const std::string& key) const {
    if (!v.is_array() || v.size() != 2 || !v[0].is_array() || !v[1].is_array() ||
        v[0].size() != 2 || v[1].size() != 2) {
      fail(key, key + " must be a 2x2 array");
    }
    const Vec2 r1 = vec2(v[0], key, key);
    const Vec2 r2 = vec2(v[1], key, key);
    return {r1.v1, r1.v2, r2.v1, r2.v2};
  }
};

}  // namespace

SystemConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(line_of_byte(text, e.byte == 0 ? 0 : e.byte - 1),
                      std::string("malformed JSON: ") + e.what());
  }
  const Reader rd{text};
  if (!doc.is_object()) throw ConfigError(1, "config must be a JSON object");
  for (const char* key : {"A", "N", "b"}) {
    if (!doc.contains(key)) throw ConfigError(1, std::string("missing field \"") + key + "\"");
  }

  SystemConfig cfg;
  cfg.system.A = rd.mat2(doc["A"], "A");
  cfg.system.N = rd.mat2(doc["N"], "N");
  cfg.system.b = rd.vec2(doc["b"], "b", "b");

  if (doc.contains("design")) {
    const json& d = doc["design"];
    if (!d.is_object()) rd.fail("design", "design must be an object");
    if (d.contains("p1_max")) cfg.grid.p1_max = rd.number(d["p1_max"], "p1_max", "p1_max");
    if (d.contains("p2_max")) cfg.grid.p2_max = rd.number(d["p2_max"], "p2_max", "p2_max");
    if (d.contains("steps")) {
      if (!d["steps"].is_number_integer()) rd.fail("steps", "steps must be an integer");
      cfg.grid.steps = d["steps"].get<int>();
    }
    if (d.contains("tol_def")) cfg.tol_def = rd.number(d["tol_def"], "tol_def", "tol_def");
    if (!(cfg.grid.p1_max > 0.0) || !(cfg.grid.p2_max > 0.0) || cfg.grid.steps < 2) {
      rd.fail("design", "design grid needs p1_max > 0, p2_max > 0 and steps >= 2");
    }
    if (!(cfg.tol_def > 0.0)) rd.fail("tol_def", "tol_def must be positive");
  }

  if (doc.contains("simulate")) {
    const json& s = doc["simulate"];
    if (!s.is_object()) rd.fail("simulate", "simulate must be an object");
    SimulationBlock sim;
    if (s.contains("law")) {
      const json& law = s["law"];
      if (!law.is_string()) rd.fail("law", "law must be \"gutman\", \"sontag\" or \"open\"");
      const std::string name = law.get<std::string>();
      if (name == "gutman") {
        sim.law = LawKind::kGutman;
      } else if (name == "sontag") {
        sim.law = LawKind::kSontag;
      } else if (name == "open") {
        sim.law = LawKind::kOpen;
      } else {
        rd.fail("law", "law must be \"gutman\", \"sontag\" or \"open\"");
      }
    }
    if (s.contains("alpha")) {
      sim.alpha = rd.number(s["alpha"], "alpha", "alpha");
      if (!(sim.alpha > 0.0)) rd.fail("alpha", "alpha must be positive");
    }
    if (s.contains("u")) sim.u = rd.number(s["u"], "u", "u");
    if (s.contains("x0")) {
      const json& x0 = s["x0"];
      if (!x0.is_array()) rd.fail("x0", "x0 must be an array of 2-vectors");
      sim.x0.clear();
      for (const json& v : x0) sim.x0.push_back(rd.vec2(v, "x0", "x0 entry"));
    }
    if (s.contains("dt")) sim.dt = rd.number(s["dt"], "dt", "dt");
    if (s.contains("T")) sim.T = rd.number(s["T"], "T", "T");
    if (!(sim.dt > 0.0) || !(sim.T >= sim.dt)) rd.fail("dt", "simulation needs dt > 0 and T >= dt");
    if (s.contains("P")) sim.P = rd.mat2(s["P"], "P");
    cfg.simulate = sim;
  }
  return cfg;
}

SystemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

Mat2 p_from_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(line_of_byte(text, e.byte == 0 ? 0 : e.byte - 1),
                      std::string("malformed report: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("P") || doc["P"].is_null()) {
    throw ConfigError(1, "report carries no matrix \"P\"");
  }
  return Reader{text}.mat2(doc["P"], "P");
}

}  // namespace clf2d::cli
