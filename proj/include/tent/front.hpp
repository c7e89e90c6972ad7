#pragma once

#include <iosfwd>
#include <memory>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "tent/space_mesh.hpp"
#include "tent/wavespeed_field.hpp"

namespace tent {

/// A front facet lifted to spacetime.
struct FacetLift {
    SimplexId simplex = -1;
    SpacetimeSimplex lifted;
    SpacePoint gradient;                  // gradient of the linear interpolant
    std::array<double, 3> edge_gradients{};  // |dt| / length per edge (0-1, 0-2, 1-2)
};

/// Continuous piecewise-linear time function over the vertices of a space
/// mesh. Tracks its local minima ordered by (time, vertex id).
class Front {
public:
    /// All-zero front, or the given per-vertex times (finite, >= 0).
    explicit Front(std::shared_ptr<const SpaceMesh> mesh, std::vector<double> times = {});

    const SpaceMesh& mesh() const noexcept { return *mesh_; }
    const std::shared_ptr<const SpaceMesh>& mesh_ptr() const noexcept { return mesh_; }

    double time(VertexId v) const { return times_.at(v); }
    std::span<const double> times() const noexcept { return times_; }
    EventPoint event(VertexId v) const { return {mesh_->vertex(v), times_.at(v)}; }

    bool is_local_minimum(VertexId v) const;
    /// Vertices with t(v) <= t(q) for every neighbor q, ascending by id.
    std::vector<VertexId> local_minima() const;
    /// Local minima ordered by (time, id).
    const std::set<std::pair<double, VertexId>>& minima_queue() const noexcept { return minima_; }
    /// Global minimum, ties to the smallest id.
    VertexId lowest() const { return minima_.begin()->second; }
    double min_time() const { return minima_.begin()->first; }
    double max_time() const;

    /// The front with t(p) raised by dt; this front is unchanged.
    Front advanced(VertexId p, double dt) const;
    /// Raises t(p) by dt in place. Throws InvalidArgument for dt < 0.
    void advance(VertexId p, double dt);

    /// |t(r) - t(q)| / |qr|; throws NotFound unless qr is a mesh edge.
    double edge_gradient(VertexId q, VertexId r) const;
    /// Gradient of the linear interpolant over a space simplex (y = 0 in 1D).
    SpacePoint facet_gradient(SimplexId s) const;
    FacetLift lift(SimplexId s) const;
    /// The facet as a spacetime simplex, vertices in sorted-id order.
    SpacetimeSimplex lifted(SimplexId s) const;

private:
    void refresh_minimum(VertexId v);

    std::shared_ptr<const SpaceMesh> mesh_;
    std::vector<double> times_;
    std::vector<char> is_min_;
    std::set<std::pair<double, VertexId>> minima_;
};

/// Gradient of the linear function through the given event points (2 or 3).
SpacePoint linear_gradient(std::span<const EventPoint> pts);

/// `t <vertex> <time>` per vertex.
void write_front_snapshot(const Front& front, std::ostream& out);
/// Indexed facet list with lifted coordinates: `v <coords...> <t>` then
/// `f <i> <j> [<k>]`.
void write_terrain(const Front& front, std::ostream& out);
/// Reads `t <vertex> <time>` rows; every vertex must be listed once.
std::vector<double> read_front_snapshot(std::istream& in, int vertex_count);

}  // namespace tent
