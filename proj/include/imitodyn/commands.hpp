#pragma once

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>

namespace imitodyn {

struct CommandOptions {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<std::size_t> runs;
  std::ostream* log = &std::cout;
  std::ostream* err = &std::cerr;
};

/// Exit codes: 0 success, 1 runtime failure, 2 invalid config.
int cmd_simulate(const CommandOptions& opts);
int cmd_ode(const CommandOptions& opts);
int cmd_landscape(const CommandOptions& opts);
int cmd_metastability(const CommandOptions& opts);
int cmd_compare(const CommandOptions& opts);

} // namespace imitodyn
