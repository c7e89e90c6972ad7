#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "tent/front.hpp"
#include "tent/kernels.hpp"
#include "tent/space_mesh.hpp"
#include "tent/wavespeed_field.hpp"

namespace tent {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Earliest time the cone of influence of front facet s (slope `slope`)
/// reaches the vertical line over x: min over y in s of t(y) + slope |x - y|.
double facet_entry_time(const Front& front, SimplexId s, double slope, SpacePoint x);

struct ConeNode {
    SpacePoint lo, hi;  // bounding box of the covered facets
    double t_min = 0.0;  // lowest covered front time
    double slope = 0.0;  // minimum covered leaf slope
    int left = -1, right = -1, parent = -1;
    SimplexId facet = -1;  // leaves only
};

struct RayHit {
    double time = kInfinity;
    SimplexId facet = -1;
};

struct SlopeHit {
    double slope = kInfinity;
    SimplexId facet = -1;
};

struct QueryCounters {
    std::int64_t queries = 0;
    std::int64_t nodes_visited = 0;
};

/// Balanced binary tree of bounding cones over the front facets. Node cones
/// have their apex region at the node's bounding box and lowest time, and
/// the subtree's minimum slope.
class ConeHierarchy {
public:
    /// Leaf slopes given per facet.
    static ConeHierarchy build(const Front& front, std::vector<double> leaf_slopes);
    /// Leaf slopes from min_slope_over of each lifted facet.
    static ConeHierarchy build(const Front& front, const SlopeField& field, int samples = 0);

    /// First entry of the vertical ray above p into a cone of influence of
    /// a facet outside p's star. Ties go to the smallest facet id.
    RayHit ray_shoot(const Front& front, VertexId p) const;
    /// Minimum slope over facets outside p's star whose cone of influence
    /// meets the tentpole from (p, t(p)) to (p, top).
    SlopeHit min_slope_intersecting(const Front& front, VertexId p, double top) const;

    /// Replaces a leaf slope and recomputes its ancestors. Throws NotFound.
    void update_leaf(SimplexId facet, double slope);
    /// As update_leaf, also refreshing the leaf's time bound from the front.
    void refresh_leaf(SimplexId facet, double slope, const Front& front);

    std::span<const double> leaf_slopes() const noexcept { return slopes_; }
    double leaf_slope(SimplexId facet) const { return slopes_.at(facet); }
    std::span<const ConeNode> nodes() const noexcept { return nodes_; }
    int root() const noexcept { return root_; }
    int leaf_of(SimplexId facet) const { return leaf_.at(facet); }
    /// Edges on the longest root-to-leaf path.
    int depth() const noexcept { return depth_; }

    const QueryCounters& counters() const noexcept { return counters_; }
    void reset_counters() noexcept { counters_ = {}; }

private:
    int build_range(const Front& front, std::vector<SimplexId>& order, int lo, int hi, int parent, int level);
    void pull(int node);
    void recompute_path(int leaf);

    std::vector<ConeNode> nodes_;
    std::vector<int> leaf_;
    std::vector<double> slopes_;
    int root_ = -1;
    int depth_ = 0;
    mutable QueryCounters counters_;
};

/// O(m) reference for ray_shoot.
RayHit exhaustive_ray_shoot(const Front& front, std::span<const double> slopes, VertexId p,
                            kernels::Exec exec = kernels::Exec::serial);
/// O(m) reference for min_slope_intersecting.
SlopeHit exhaustive_min_slope(const Front& front, std::span<const double> slopes, VertexId p, double top,
                              kernels::Exec exec = kernels::Exec::serial);

}  // namespace tent
