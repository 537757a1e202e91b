#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "reeb/convex/body.hpp"

namespace reeb::cli {

inline constexpr const char* tool_version = "reeb_cert 1.0.0";

struct RunConfig {
  std::string family;                 ///< revolution | ellipsoid | hopf | perturbed_ball
  double c = 1.0;                     ///< revolution
  std::vector<double> a;              ///< ellipsoid axes (a₁, a₂)
  std::vector<convex::PerturbedBall::Term> terms;
  std::vector<std::string> criteria;
  std::optional<std::uint64_t> seed;
  double tol = 1e-10;
  double event_tol = 1e-9;
  std::size_t budget = 256;           ///< κ samples per T
  std::vector<double> T_grid{25, 50, 100, 200};
  std::string out = ".";
  int audit_ns = 32, audit_ntheta = 16;
  nlohmann::ordered_json source;      ///< the validated document, for hashing
};

/// Parses and validates; unknown keys and wrong types raise ConfigError.
RunConfig parse_config(const nlohmann::ordered_json& j);
RunConfig load_config(const std::string& path);

/// FNV-1a 64 of the canonical (compact, key-ordered) dump.
std::string config_hash(const nlohmann::ordered_json& j);

/// Whether a criterion draws random samples for this model.
bool needs_seed(const RunConfig& c, const std::string& criterion);

} // namespace reeb::cli
