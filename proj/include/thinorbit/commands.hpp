#pragma once

// The CLI command bodies and the shared exit-code policy, separated from
// argument parsing so tests can drive them directly.

#include <functional>
#include <string>

#include "thinorbit/config.hpp"

namespace thinorbit {

// Each command writes its output to out_path (stdout when empty) and throws
// the library error taxonomy on failure.
void cmd_ball(const RunConfig& cfg, const std::string& out_path);
void cmd_exceptional(const RunConfig& cfg, const std::string& out_path);
void cmd_circle(const RunConfig& cfg, const std::string& out_path);
void cmd_params(const std::string& delta, double N, const std::string& eps0,
                const std::string& eps1, const std::string& T_exponent,
                const std::string& out_path);

// Runs the body mapping the error taxonomy to exit codes: 0 success,
// 1 configuration/usage, 2 infeasible parameters (naming the constraint on
// stderr), 3 arithmetic overflow, 4 capacity or accuracy.
int run_command(const std::function<void()>& body);

}  // namespace thinorbit
