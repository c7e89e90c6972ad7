#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "tent/pitcher.hpp"

namespace tent {

struct RunConfig {
    std::string mesh_path;
    std::string field_path;
    double target_time = 0.0;
    double epsilon = 0.5;
    std::optional<double> eta;
    Heuristic heuristic = Heuristic::lowest_time;
    bool hierarchy = true;
    bool assert_invariants = false;
    std::string out_path;          // spacetime mesh; empty: not written
    std::string stats_path;        // empty: not written
    std::string terrain_path;      // final front terrain
    std::string vtk_path;          // legacy VTK copy of the spacetime mesh
    std::string diagnostics_path;  // per-facet verdicts of the final front
    int snapshot_every = 0;        // terrain snapshot every N patches
    bool compare_global_min = false;
    bool timing = false;           // adds wall_time_s to the stats
};

enum ExitCode : int { exit_ok = 0, exit_input = 2, exit_contract = 3 };

/// Runs the mesher and writes the requested artifacts. Diagnostics go to
/// `err`. Returns an ExitCode.
int run(const RunConfig& config, std::ostream& err);

/// Snapshot file name for the given patch count: <out>.terrain-<count>.txt.
std::string snapshot_path(const std::string& out_path, long long patches);

}  // namespace tent
