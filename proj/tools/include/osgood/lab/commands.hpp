#pragma once

#include <functional>

#include "osgood/lab/config.hpp"
#include "osgood/lab/report.hpp"

namespace osgood::lab {

/// A subcommand in two phases: `plan` resolves and validates every parameter
/// without doing work, `run` executes the resolved plan.
struct Command {
  std::function<Json(const ExperimentConfig&)> plan;
  std::function<Report(const ExperimentConfig&, const Json& resolved)> run;
};

Command modulus_command();
Command acm_command();
Command flow_command();
Command interp_command();
Command euler_command();

/// ConfigError for an unknown name.
Command command_for(const std::string& subcommand);

/// Runs fn(i) for i < count on up to `threads` workers; results are stored by index.
void parallel_for_index(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace osgood::lab
