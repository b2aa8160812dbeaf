#include "osgood/lab/commands.hpp"

#include <algorithm>
#include <exception>
#include <thread>

namespace osgood::lab {

Command command_for(const std::string& subcommand) {
  if (subcommand == "modulus") return modulus_command();
  if (subcommand == "acm") return acm_command();
  if (subcommand == "flow") return flow_command();
  if (subcommand == "interp") return interp_command();
  if (subcommand == "euler") return euler_command();
  throw ConfigError("unknown subcommand '" + subcommand + "'");
}

void parallel_for_index(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace osgood::lab
