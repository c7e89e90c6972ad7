#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tent/geometry.hpp"

namespace tent {

using VertexId = int;
using SimplexId = int;

/// Vertex-index tuple of a space simplex, sorted ascending. Only the first
/// `dim + 1` entries are meaningful; the rest are -1.
using SimplexVertices = std::array<VertexId, 3>;

struct MeshStats {
    double wmin = 0.0;
    double diameter = 0.0;
    int max_degree = 0;
};

/// Immutable simplicial complex over a bounded domain in R^1 or R^2.
class SpaceMesh {
public:
    /// Validates and canonicalizes. `simplices` holds `dim + 1` indices per
    /// entry in input order. `lines`, when given, maps each simplex to the
    /// document line it came from (for error messages).
    static SpaceMesh build(int dim, std::vector<SpacePoint> vertices,
                           std::vector<std::vector<VertexId>> simplices,
                           std::span<const int> lines = {});

    int dim() const noexcept { return dim_; }
    int vertex_count() const noexcept { return static_cast<int>(vertices_.size()); }
    int simplex_count() const noexcept { return static_cast<int>(simplices_.size()); }
    int simplex_size() const noexcept { return dim_ + 1; }

    SpacePoint vertex(VertexId v) const { return vertices_[v]; }
    std::span<const SpacePoint> vertices() const noexcept { return vertices_; }

    /// Sorted vertex tuple.
    const SimplexVertices& simplex(SimplexId s) const { return simplices_[s]; }
    std::span<const VertexId> simplex_span(SimplexId s) const {
        return {simplices_[s].data(), static_cast<std::size_t>(dim_ + 1)};
    }
    /// True when the input ordering was an odd permutation of the sorted tuple.
    bool flipped(SimplexId s) const { return flipped_[s] != 0; }
    /// Vertex tuple in the original input orientation.
    std::vector<VertexId> oriented(SimplexId s) const;

    /// Simplices incident on v, ascending. Throws NotFound for an unknown id.
    std::span<const SimplexId> vertex_star(VertexId v) const;
    /// Vertices sharing an edge with v, ascending.
    std::span<const VertexId> neighbors(VertexId v) const;
    bool is_edge(VertexId a, VertexId b) const;

    /// Segment length (1D) or minimum altitude (2D).
    double simplex_width(SimplexId s) const { return widths_[s]; }
    /// Length (1D) or area (2D).
    double simplex_measure(SimplexId s) const { return measures_[s]; }

    const MeshStats& stats() const noexcept { return stats_; }
    double wmin() const noexcept { return stats_.wmin; }
    double diameter() const noexcept { return stats_.diameter; }
    int max_degree() const noexcept { return stats_.max_degree; }

    SpacePoint bbox_min() const noexcept { return lo_; }
    SpacePoint bbox_max() const noexcept { return hi_; }

    /// Id of a simplex containing point x (closed), or -1. Linear scan.
    SimplexId locate(SpacePoint x, double tol = 1e-12) const;

private:
    SpaceMesh() = default;
    void compute_adjacency();
    void validate_manifold(std::span<const int> lines) const;

    int dim_ = 1;
    std::vector<SpacePoint> vertices_;
    std::vector<SimplexVertices> simplices_;
    std::vector<std::uint8_t> flipped_;
    std::vector<double> widths_;
    std::vector<double> measures_;
    std::vector<std::vector<SimplexId>> stars_;
    std::vector<std::vector<VertexId>> neighbors_;
    MeshStats stats_;
    SpacePoint lo_, hi_;
};

/// Brute-force statistics; the reference for SpaceMesh::stats().
MeshStats mesh_stats(const SpaceMesh& mesh);

// Mesh document: `dim <d>`, then `v <x> [<y>]` and `s <i> <j> [<k>]` lines;
// `#` starts a comment. Throws ValidationError carrying the line number.
SpaceMesh load_mesh(std::istream& in);
SpaceMesh load_mesh_file(const std::string& path);
void save_mesh(const SpaceMesh& mesh, std::ostream& out);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_real(double value);

}  // namespace tent
