#pragma once

#include <iosfwd>
#include <string>

#include "catube/scene_config.hpp"

// Batch commands behind the CLI. Each builds the scene from the config,
// writes CSV artifacts into cfg.out_dir and reports a process exit code:
// 0 success, 1 validation failure, 2 verification failure. The cmd_*
// functions throw std::invalid_argument on validation problems; run_command
// maps exceptions onto exit code 1.

namespace catube::cli {

enum class Command { construct, verify, sweep, focal };

int cmd_construct(const SceneConfig& cfg, std::ostream& out);
int cmd_verify(const SceneConfig& cfg, std::ostream& out);
int cmd_sweep(const SceneConfig& cfg, std::ostream& out);
int cmd_focal(const SceneConfig& cfg, std::ostream& out);

int run_command(Command cmd, const SceneConfig& cfg, std::ostream& out,
                std::ostream& err);

// 17-significant-digit formatting used for every floating-point output.
std::string format17(double v);

}  // namespace catube::cli
