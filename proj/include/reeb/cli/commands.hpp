#pragma once

#include <iosfwd>
#include <memory>

#include "reeb/cli/config.hpp"
#include "reeb/sections/model.hpp"
#include "reeb/sections/pages.hpp"

namespace reeb::cli {

/// Exit codes: 0 all certified, 2 some not-certified, 3 inconclusive, 1 runtime or config error.
enum ExitCode : int { exit_ok = 0, exit_error = 1, exit_not_certified = 2, exit_inconclusive = 3 };

std::shared_ptr<const convex::ConvexBody> make_body(const RunConfig& c);
std::shared_ptr<const sections::S3Flow> make_flow(const RunConfig& c);
/// Page bound by the reference orbit γ₀ used for κ and K_σ.
sections::DiskPage kappa_page(const RunConfig& c);

int cmd_certify(const RunConfig& c, std::ostream& out);
int cmd_audit(const RunConfig& c, std::ostream& out);
int cmd_kappa(const RunConfig& c, std::ostream& out);
int cmd_delta_star(std::ostream& out);

} // namespace reeb::cli
