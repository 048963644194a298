#pragma once

#include <stdexcept>
#include <string>

namespace topometric {

// Failure classes surfaced by the experiment harness. Each maps to a process
// exit code in the command-line tool.

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitScenario = 3,
    kExitIo = 4,
};

}  // namespace topometric
