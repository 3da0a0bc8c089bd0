#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nlchns/config.hpp"

namespace nlchns {

enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitAborted = 3 };

const std::vector<std::string>& subcommands();

// runs one subcommand; artifacts go to config.output.directory, the summary to `out`,
// a one-line JSON error to `err` on failure
int run_subcommand(const std::string& sub, const RunConfig& config, std::ostream& out, std::ostream& err);
int run_subcommand(const std::string& sub, const std::string& config_path, std::ostream& out, std::ostream& err,
                   const std::string& output_override = "");

}  // namespace nlchns
