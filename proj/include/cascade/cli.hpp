#pragma once

#include "cascade/config.hpp"

namespace cascade {

// One command per figure family; each writes CSV files (with the resolved
// configuration echoed in the header) into cfg.out_dir plus a README.txt
// documenting the columns.
void cmd_rabi(const RunConfig& cfg);
void cmd_spectrum(const RunConfig& cfg);
void cmd_occupation(const RunConfig& cfg);
void cmd_g2(const RunConfig& cfg);
void cmd_hom(const RunConfig& cfg);
void cmd_g2map(const RunConfig& cfg);
void cmd_sweep(const RunConfig& cfg);

// Entry point: parses `cascade <subcommand> [flags]`. Returns the process
// exit status (0 iff all requested outputs were produced).
int run_cli(int argc, char** argv);

} // namespace cascade
