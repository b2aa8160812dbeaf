#pragma once

#include <string>
#include <vector>

namespace osgood::lab {

/// Entry point of osgood-lab; returns the process exit status.
int run_cli(const std::vector<std::string>& args);

}  // namespace osgood::lab
