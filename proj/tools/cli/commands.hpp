#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"
#include "report.hpp"

namespace whlab::cli {

inline const std::vector<std::string> kSubcommands = {
    "weights-check", "norms", "growth", "pseudospec", "symbol", "witness", "verify-all"};

/// Runs one pipeline and fills `report` (checks + artifacts); files go to cfg.out_dir.
void run_pipeline(const std::string& command, const RunConfig& cfg, VerificationReport& report);

/// Full CLI: argv[0] is the program name. Returns the exit code
/// (0 pass, 1 config/IO error, 2 failed check, 3 inconclusive only).
int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace whlab::cli
