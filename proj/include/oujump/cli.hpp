#pragma once

#include <string>
#include <vector>

namespace oujump {

/// Command-line entry point: subcommand dispatch over the analytic and
/// Monte Carlo operations, flat key-value config ingestion, self-describing
/// result documents.  Returns the process exit code: 0 ok, 2 validation or
/// config error, 3 numerical failure, 4 unsupported scenario.
int run_cli(int argc, char** argv);

/// Test hook: same dispatch with argv-style args (program name excluded)
/// and all output captured into `captured`.
int run_cli(const std::vector<std::string>& args, std::string& captured);

}  // namespace oujump
