#pragma once

// Stand-in for the DG solve of a patch: reports outflow-facet slopes by
// sampling the slope field. The only place field state is written.

#include <span>
#include <vector>

#include "tent/spacetime_mesh.hpp"
#include "tent/wavespeed_field.hpp"

namespace tent {

struct SolveResult {
    std::vector<double> outflow_slopes;  // one per patch.outflow entry
    std::vector<SimplexId> table_updates;  // table elements whose reported slope changed
};

SolveResult solve_patch(const Patch& patch, const SpacetimeMesh& mesh, std::span<const int> inflow_elements,
                        SlopeField& field, int samples = 0);

}  // namespace tent
