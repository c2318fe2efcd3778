#pragma once

#include "config.hpp"

#include <string>

namespace parot::cli {

struct SolveArgs {
  std::string alpha;
  bool with_hf = false;
};

int cmd_build(const ExperimentConfig& cfg);
int cmd_solve(const ExperimentConfig& cfg, const SolveArgs& args);
int cmd_bench(const ExperimentConfig& cfg);
int cmd_colorize(const ExperimentConfig& cfg);

}  // namespace parot::cli
