#include "tent/solver_stub.hpp"

#include <algorithm>

namespace tent {

namespace {

void collect_tables(SlopeField& field, std::vector<TableField*>& out) {
    if (auto* t = dynamic_cast<TableField*>(&field)) out.push_back(t);
    if (auto* k = dynamic_cast<ClampedField*>(&field)) collect_tables(k->inner(), out);
    if (auto* c = dynamic_cast<CompositeField*>(&field))
        for (const auto& part : c->parts()) collect_tables(*part, out);
}

}  // namespace

SolveResult solve_patch(const Patch& patch, const SpacetimeMesh& mesh, std::span<const int> /*inflow_elements*/,
                        SlopeField& field, int samples) {
    SolveResult result;
    auto verts = mesh.vertices();
    for (std::size_t i = 0; i < patch.outflow.size(); ++i) {
        SpacetimeSimplex facet;
        for (int v : patch.outflow[i].span()) facet.push(verts[v]);
        result.outflow_slopes.push_back(min_slope_over(field, facet, samples, patch.star[i]).value);
    }
    std::vector<TableField*> tables;
    collect_tables(field, tables);
    for (TableField* table : tables)
        for (std::size_t i = 0; i < patch.outflow.size(); ++i) {
            double top = 0.0;
            for (int v : patch.outflow[i].span()) top = std::max(top, verts[v].time);
            if (table->record_solved(patch.star[i], top)) result.table_updates.push_back(patch.star[i]);
        }
    return result;
}

}  // namespace tent
