#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "reeb/cli/commands.hpp"
#include "reeb/util/errors.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<double> tol, event_tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> budget;
  std::optional<std::string> out;
};

void add_common(CLI::App* sub, Flags& f, bool with_config) {
  if (with_config) sub->add_option("--config", f.config, "JSON run configuration")->required();
  sub->add_option("--tol", f.tol, "integration tolerance (abs and rel)");
  sub->add_option("--event-tol", f.event_tol, "event detection tolerance");
  sub->add_option("--seed", f.seed, "sampling seed");
  sub->add_option("--budget", f.budget, "sample budget");
  sub->add_option("--out", f.out, "output directory");
}

reeb::cli::RunConfig resolve(const Flags& f) {
  auto c = reeb::cli::load_config(f.config);
  // flags override the file and are part of the hashed inputs
  auto src = c.source;
  if (f.tol) src["tol"] = *f.tol;
  if (f.event_tol) src["event_tol"] = *f.event_tol;
  if (f.seed) src["seed"] = *f.seed;
  if (f.budget) src["budget"] = *f.budget;
  c = reeb::cli::parse_config(src);
  if (f.out) c.out = *f.out;
  return c;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical right-handedness certificates for Reeb and geodesic flows"};
  app.require_subcommand(1);
  Flags f;
  auto* certify = app.add_subcommand("certify", "run the configured criteria and write certificates");
  auto* audit = app.add_subcommand("audit", "geometric bounds on the Birkhoff annulus return map");
  auto* kappa = app.add_subcommand("kappa", "estimate kappa along a T grid");
  auto* dstar = app.add_subcommand("delta-star", "print the pinching threshold");
  add_common(certify, f, true);
  add_common(audit, f, true);
  add_common(kappa, f, true);
  add_common(dstar, f, false);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : reeb::cli::exit_error;
  }
  try {
    if (dstar->parsed()) return reeb::cli::cmd_delta_star(std::cout);
    const auto c = resolve(f);
    if (certify->parsed()) return reeb::cli::cmd_certify(c, std::cout);
    if (audit->parsed()) return reeb::cli::cmd_audit(c, std::cout);
    if (kappa->parsed()) return reeb::cli::cmd_kappa(c, std::cout);
  } catch (const reeb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return reeb::cli::exit_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return reeb::cli::exit_error;
  }
  return reeb::cli::exit_error;
}
