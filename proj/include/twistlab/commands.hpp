#pragma once

/*! @file commands.hpp
    @brief Library entry points behind the CLI subcommands.  The binary is a
           thin wrapper over run_command so reproducibility (criterion: a
           rerun with identical config is byte-identical) can be tested
           in-process. */

#include <string>
#include <vector>

#include "twistlab/config.hpp"
#include "twistlab/energy_law.hpp"
#include "twistlab/grid.hpp"
#include "twistlab/minimizer.hpp"
#include "twistlab/types.hpp"

namespace twistlab {

/// Dispatch one subcommand (build-law, minimize, twist-report, star-check,
/// holder-fit, shear, verify).  Writes artifacts + summary.txt under
/// out_dir; returns the process exit code (0 iff all assertions passed).
int run_command(const std::string &cmd, const RunConfig &cfg,
                const std::string &out_dir);

// Config factories shared between commands and tests.
Mesh mesh_from_config(const RunConfig &cfg);
EnergyLaw law_from_config(const RunConfig &cfg);
BoundaryData boundary_from_config(const RunConfig &cfg);
Mat2X map_from_config(const RunConfig &cfg, const Mesh &mesh);
std::vector<Vec2> centers_from_config(const RunConfig &cfg);

}  // namespace twistlab
