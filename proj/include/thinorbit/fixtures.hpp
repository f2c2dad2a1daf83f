#pragma once

// Built-in problem instances, registered by name so tests and the CLI need
// no external files.

#include <string>
#include <vector>

#include "thinorbit/matgroup.hpp"

namespace thinorbit {

// Returns the named spec, already repositioned where the raw definition
// violates v1 != 0 / w2 != 0.  Unknown names fail.
GroupSpec fixture_spec(const std::string& name);

std::vector<std::string> fixture_names();

}  // namespace thinorbit
