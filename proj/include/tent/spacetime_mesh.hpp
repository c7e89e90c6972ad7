#pragma once

#include <array>
#include <span>
#include <vector>

#include "tent/geometry.hpp"
#include "tent/space_mesh.hpp"

namespace tent {

/// Spacetime vertex ids of a facet or element; `count` entries are valid.
template <int N>
struct IdTuple {
    std::array<int, N> ids{};
    int count = 0;

    void push(int v) { ids[count++] = v; }
    std::span<const int> span() const { return {ids.data(), static_cast<std::size_t>(count)}; }
};

using FacetIds = IdTuple<3>;
using ElementIds = IdTuple<4>;

struct Element {
    ElementIds vertices;   // P', P, then the other star-simplex vertices
    int patch = -1;
    SimplexId space_simplex = -1;
    double volume = 0.0;  // length x time (1D) or area x time (2D)
};

/// One tent: every element shares the tentpole (P, P').
struct Patch {
    int id = -1;
    VertexId vertex = -1;
    int bottom = -1;  // spacetime id of P
    int top = -1;     // spacetime id of P'
    double t_from = 0.0;
    double height = 0.0;
    std::vector<SimplexId> star;
    std::vector<int> elements;
    std::vector<FacetIds> inflow;    // per star simplex, on the old front
    std::vector<FacetIds> outflow;   // per star simplex, on the new front
    std::vector<FacetIds> implicit;  // vertical faces containing the tentpole
    std::vector<int> inflow_patches;  // per star simplex; -1 for the initial front
    std::vector<int> inflow_elements;  // elements whose outflow facets are this patch's inflow facets
};

/// Patches, elements and their spacetime vertices, in construction order.
class SpacetimeMesh {
public:
    SpacetimeMesh() = default;
    /// One spacetime vertex per space vertex at its initial time.
    SpacetimeMesh(const SpaceMesh& mesh, std::span<const double> initial_times);

    int space_dim() const noexcept { return dim_; }
    std::span<const EventPoint> vertices() const noexcept { return vertices_; }
    std::span<const Element> elements() const noexcept { return elements_; }
    std::span<const Patch> patches() const noexcept { return patches_; }
    const Patch& patch(int id) const { return patches_.at(id); }

    /// Current top spacetime vertex over a space vertex.
    int front_vertex(VertexId v) const { return front_vertex_.at(v); }
    /// Patch whose outflow is the current front facet over s, or -1.
    int facet_patch(SimplexId s) const { return facet_patch_.at(s); }
    int facet_element(SimplexId s) const { return facet_element_.at(s); }

    /// Appends the patch lifting vertex p of `mesh` from t_from by height.
    const Patch& add_patch(const SpaceMesh& mesh, VertexId p, double t_from, double height);

    double total_volume() const;
    /// True when every inflow patch reference points to an earlier patch.
    bool dependence_acyclic() const;

private:
    int dim_ = 1;
    std::vector<EventPoint> vertices_;
    std::vector<Element> elements_;
    std::vector<Patch> patches_;
    std::vector<int> front_vertex_;
    std::vector<int> facet_patch_;
    std::vector<int> facet_element_;
};

/// Spacetime measure of a simplex given by its event points (2D: triangle in
/// x-t; 3D: tetrahedron in x-y-t).
double spacetime_volume(std::span<const EventPoint> pts);

}  // namespace tent
