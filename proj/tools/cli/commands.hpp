#pragma once

#include "cli/config.hpp"
#include "homodyne/error.hpp"

namespace homodyne::cli {

// Each command returns a process exit code. Invalid input surfaces as a
// thrown homodyne::Error and is mapped by exit_code_for().
int cmd_sweep_surface(const RunConfig& cfg);
int cmd_split_scan(const RunConfig& cfg);
int cmd_max_cfi(const RunConfig& cfg);
int cmd_states_table(const RunConfig& cfg);
int cmd_simulate(const RunConfig& cfg);
int cmd_verify_oracle(const RunConfig& cfg);

int exit_code_for(ErrorKind kind);

}  // namespace homodyne::cli
