#pragma once

// Run configuration shared by the CLI and JSON config files.

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cwlab/eigensolve.hpp"
#include "cwlab/error.hpp"
#include "cwlab/model.hpp"
#include "cwlab/io/sweep.hpp"

namespace cwlab::io {

/// Flea parameters as given by the user; b and c may depend on N.
struct FleaSpec {
  std::string b;
  std::string c;
  double d = 0.0;

  FleaParams at(int N) const {
    FleaParams f{Expression(b).evaluate(N), Expression(c).evaluate(N), d};
    f.validate();
    return f;
  }
};

struct RunConfig {
  std::string command;
  std::string n_text = "60";  // single N or sweep, as given
  double B = 0.5;
  double J = 1.0;
  std::optional<FleaSpec> flea;
  std::string levels = "10";  // count or "bound"
  int k = 0;                  // state index for groundstate
  ClusterPolicy policy = ClusterPolicy::symmetrized;
  std::filesystem::path out_dir = "out";
  std::set<std::string> formats{"csv"};
  bool expect_fail = false;

  std::vector<int> sweep() const { return parse_sweep(n_text); }

  int single_N() const {
    const auto ns = sweep();
    if (ns.size() != 1) throw ParameterError("command '" + command + "' takes a single N, got '" + n_text + "'");
    return ns.front();
  }

  ModelParams model(int N) const {
    ModelParams p{N, B, J, std::nullopt};
    if (flea) p.flea = flea->at(N);
    p.validate();
    return p;
  }

  bool wants(const std::string& fmt) const { return formats.count(fmt) > 0; }

  void validate() const {
    static const std::set<std::string> commands{"spectrum", "groundstate", "splitting", "width", "tables", "oracle-check"};
    if (!commands.count(command)) throw ParameterError("unknown command '" + command + "'");
    if (!std::isfinite(B)) throw ParameterError("B must be finite");
    if (J != 1.0) throw ParameterError("only J = 1 is supported");
    for (const auto& f : formats)
      if (f != "csv" && f != "svg") throw ParameterError("unknown format '" + f + "' (expected csv,svg)");
    if (formats.empty()) throw ParameterError("no output format selected");
    if (k < 0) throw ParameterError("--k must be >= 0");
    if (levels != "bound") {
      const long n = detail::parse_long(levels, "--levels");
      if (n < 1) throw ParameterError("--levels must be >= 1 or 'bound', got '" + levels + "'");
    }
    for (int N : sweep()) (void)model(N);
  }
};

inline std::set<std::string> parse_formats(const std::string& text) {
  std::set<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = detail::trim(item);
    if (!item.empty()) out.insert(item);
  }
  return out;
}

namespace detail {

inline std::string json_number_or_string(const nlohmann::json& j, const char* key) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  if (j.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << j.get<double>();
    return os.str();
  }
  throw ParameterError(std::string("config key '") + key + "' must be a number or string");
}

}  // namespace detail

/// Merge a JSON object into `cfg`. Keys: command, N, B, J, flea{b,c,d},
/// levels, k, policy, out, format (string or list), expect_fail.
inline void apply_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw ParameterError("config must be a JSON object");
  static const std::set<std::string> known{"command", "N", "B", "J", "flea", "levels", "k",
                                           "policy", "out", "format", "expect_fail"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw ParameterError("unknown config key '" + key + "'");
  try {
    if (j.contains("command")) cfg.command = j["command"].get<std::string>();
    if (j.contains("N")) cfg.n_text = detail::json_number_or_string(j["N"], "N");
    if (j.contains("B")) cfg.B = j["B"].get<double>();
    if (j.contains("J")) cfg.J = j["J"].get<double>();
    if (j.contains("flea")) {
      const auto& f = j["flea"];
      if (!f.is_object() || !f.contains("b") || !f.contains("c") || !f.contains("d"))
        throw ParameterError("config 'flea' needs b, c and d");
      cfg.flea = FleaSpec{detail::json_number_or_string(f["b"], "flea.b"),
                          detail::json_number_or_string(f["c"], "flea.c"), f["d"].get<double>()};
    }
    if (j.contains("levels")) cfg.levels = detail::json_number_or_string(j["levels"], "levels");
    if (j.contains("k")) cfg.k = j["k"].get<int>();
    if (j.contains("policy")) cfg.policy = parse_policy(j["policy"].get<std::string>());
    if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
    if (j.contains("format")) {
      if (j["format"].is_string())
        cfg.formats = parse_formats(j["format"].get<std::string>());
      else
        cfg.formats = j["format"].get<std::set<std::string>>();
    }
    if (j.contains("expect_fail")) cfg.expect_fail = j["expect_fail"].get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("bad config value: ") + e.what());
  }
}

inline nlohmann::json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParameterError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
}

inline nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["command"] = cfg.command;
  j["N"] = cfg.n_text;
  j["B"] = cfg.B;
  j["J"] = cfg.J;
  if (cfg.flea) j["flea"] = {{"b", cfg.flea->b}, {"c", cfg.flea->c}, {"d", cfg.flea->d}};
  j["levels"] = cfg.levels;
  j["k"] = cfg.k;
  j["policy"] = to_string(cfg.policy);
  j["out"] = cfg.out_dir.string();
  j["format"] = cfg.formats;
  return j;
}

}  // namespace cwlab::io
