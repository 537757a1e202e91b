#include "reeb/cli/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

#include "reeb/util/errors.hpp"

namespace reeb::cli {

namespace {

const std::set<std::string> known_keys{"family", "c",   "a",       "terms",  "criteria", "criterion", "seed",
                                       "tol",    "event_tol", "budget", "T_grid", "out",    "audit"};
const std::set<std::string> known_criteria{"kappa", "Ksigma", "convex", "pinching"};

double number(const nlohmann::ordered_json& j, const char* key) {
  if (!j.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return j.get<double>();
}

} // namespace

RunConfig parse_config(const nlohmann::ordered_json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (!known_keys.count(k)) throw ConfigError("unknown key '" + k + "'");
  RunConfig c;
  c.source = j;
  if (!j.contains("family") || !j["family"].is_string()) throw ConfigError("'family' (string) is required");
  c.family = j["family"].get<std::string>();
  if (c.family == "revolution") {
    if (j.contains("c")) c.c = number(j["c"], "c");
    if (!(c.c > 0)) throw ConfigError("'c' must be positive");
  } else if (c.family == "ellipsoid") {
    if (!j.contains("a") || !j["a"].is_array() || j["a"].size() != 2) throw ConfigError("'a' must be [a1, a2]");
    for (const auto& x : j["a"]) c.a.push_back(number(x, "a"));
    if (!(c.a[0] > 0 && c.a[1] > 0)) throw ConfigError("ellipsoid axes must be positive");
  } else if (c.family == "perturbed_ball") {
    if (!j.contains("terms") || !j["terms"].is_array()) throw ConfigError("'terms' must be an array");
    for (const auto& t : j["terms"]) {
      if (!t.is_object() || !t.contains("c") || !t.contains("e") || !t["e"].is_array() || t["e"].size() != 4)
        throw ConfigError("each term needs 'c' and a 4-entry exponent 'e'");
      for (const auto& [k, v] : t.items())
        if (k != "c" && k != "e") throw ConfigError("unknown key '" + k + "' in term");
      convex::PerturbedBall::Term term;
      term.c = number(t["c"], "c");
      for (int i = 0; i < 4; ++i) {
        if (!t["e"][std::size_t(i)].is_number_integer() || t["e"][std::size_t(i)].get<int>() < 0)
          throw ConfigError("exponents must be non-negative integers");
        term.e[std::size_t(i)] = t["e"][std::size_t(i)].get<int>();
      }
      c.terms.push_back(term);
    }
  } else if (c.family != "hopf") {
    throw ConfigError("unknown family '" + c.family + "'");
  }
  if (c.family != "revolution" && j.contains("c")) throw ConfigError("'c' only applies to the revolution family");
  if (c.family != "ellipsoid" && j.contains("a")) throw ConfigError("'a' only applies to the ellipsoid family");
  if (c.family != "perturbed_ball" && j.contains("terms")) throw ConfigError("'terms' only applies to perturbed_ball");

  if (j.contains("criteria") && j.contains("criterion")) throw ConfigError("give either 'criteria' or 'criterion'");
  if (j.contains("criterion")) {
    if (!j["criterion"].is_string()) throw ConfigError("'criterion' must be a string");
    c.criteria.push_back(j["criterion"].get<std::string>());
  } else if (j.contains("criteria")) {
    if (!j["criteria"].is_array()) throw ConfigError("'criteria' must be an array");
    for (const auto& x : j["criteria"]) {
      if (!x.is_string()) throw ConfigError("criteria must be strings");
      c.criteria.push_back(x.get<std::string>());
    }
  }
  for (const auto& k : c.criteria)
    if (!known_criteria.count(k)) throw ConfigError("unknown criterion '" + k + "'");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("'seed' must be a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("tol")) c.tol = number(j["tol"], "tol");
  if (j.contains("event_tol")) c.event_tol = number(j["event_tol"], "event_tol");
  if (!(c.tol > 0) || !(c.event_tol > 0)) throw ConfigError("tolerances must be positive");
  if (j.contains("budget")) {
    if (!j["budget"].is_number_unsigned() || j["budget"].get<std::size_t>() == 0)
      throw ConfigError("'budget' must be a positive integer");
    c.budget = j["budget"].get<std::size_t>();
  }
  if (j.contains("T_grid")) {
    if (!j["T_grid"].is_array() || j["T_grid"].size() < 2) throw ConfigError("'T_grid' needs at least two values");
    c.T_grid.clear();
    for (const auto& x : j["T_grid"]) c.T_grid.push_back(number(x, "T_grid"));
    if (!std::is_sorted(c.T_grid.begin(), c.T_grid.end()) || c.T_grid.front() <= 0)
      throw ConfigError("'T_grid' must be positive and increasing");
  }
  if (j.contains("out")) {
    if (!j["out"].is_string()) throw ConfigError("'out' must be a string");
    c.out = j["out"].get<std::string>();
  }
  if (j.contains("audit")) {
    const auto& a = j["audit"];
    if (!a.is_object()) throw ConfigError("'audit' must be an object");
    for (const auto& [k, v] : a.items()) {
      if (k != "ns" && k != "ntheta") throw ConfigError("unknown key '" + k + "' in audit");
      if (!v.is_number_unsigned() || v.get<int>() < 2) throw ConfigError("audit grid sizes must be integers ≥ 2");
    }
    if (a.contains("ns")) c.audit_ns = a["ns"].get<int>();
    if (a.contains("ntheta")) c.audit_ntheta = a["ntheta"].get<int>();
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return parse_config(j);
}

std::string config_hash(const nlohmann::ordered_json& j) {
  // canonical form: sorted keys
  const std::string s = nlohmann::json(j).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool needs_seed(const RunConfig& c, const std::string& criterion) {
  if (criterion == "kappa") return true;
  if (criterion == "convex") return c.family == "perturbed_ball";
  if (criterion == "Ksigma") return c.family == "perturbed_ball";
  return false;
}

} // namespace reeb::cli
