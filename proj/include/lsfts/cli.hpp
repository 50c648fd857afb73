#pragma once

#include <string>
#include <vector>

namespace lsfts::cli {

/// Entry point behind the lsfts binary; split out so tests can drive
/// subcommands in-process. Returns 0 on success, 1 on usage errors, 2 on
/// data errors.
int run(const std::vector<std::string>& args);

} // namespace lsfts::cli
