#pragma once

#include <string>
#include <vector>

namespace monomod::cli {

// Full command-line entry point; args excludes the program name.
// Returns the process exit status: 0 ok, 2 validation error, 3 resource
// or precision-escalation budget exceeded.
int cli_main(const std::vector<std::string>& args);

}  // namespace monomod::cli
