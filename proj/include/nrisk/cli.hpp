#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nrisk {

/// Entry point of the `nrisk` command. Exit codes: 0 success, 1 domain error, 2 usage error.
/// Verbs: sites, flux, risk, checkpoint, fit-profile, fit-beta, paper-check, serve.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nrisk
