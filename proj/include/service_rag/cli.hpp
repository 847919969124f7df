#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "service_rag/errors.hpp"

namespace service_rag::cli {

enum class ExitStatus : int {
    success = 0,
    usage = 1,
    input = 2,
    provider = 3,
    internal = 4,
};

ExitStatus exit_status_for(ErrorKind kind) noexcept;

/// Runs one CLI invocation. `args` excludes the program name. Primary output
/// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace service_rag::cli
