#include "tent/cone_hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "tent/errors.hpp"

namespace tent {

namespace {

// min over z in [0, L] of t_a + g z + slope * |x - (a + z v)|.
double segment_entry(const EventPoint& a, const EventPoint& b, double slope, SpacePoint x) {
    SpacePoint d = b.position - a.position;
    double len = norm(d);
    SpacePoint v = (1.0 / len) * d;
    double best = std::min(a.time + slope * distance(x, a.position), b.time + slope * distance(x, b.position));
    double g = (b.time - a.time) / len;
    double k = g / slope;
    if (std::abs(k) >= 1.0) return best;
    SpacePoint w = x - a.position;
    double c0 = dot(w, v);
    double h = std::abs(cross(v, w));
    double z = c0 - k * h / std::sqrt(1.0 - k * k);
    if (z > 0.0 && z < len) {
        SpacePoint y = a.position + z * v;
        best = std::min(best, a.time + g * z + slope * distance(x, y));
    }
    return best;
}

double box_distance(SpacePoint x, SpacePoint lo, SpacePoint hi) {
    double dx = std::max({lo.x - x.x, 0.0, x.x - hi.x});
    double dy = std::max({lo.y - x.y, 0.0, x.y - hi.y});
    return std::hypot(dx, dy);
}

// Lower bound on facet_entry_time over a node, shaded down so rounding in
// the exact evaluation can never put a facet below its node's bound.
double node_bound(const ConeNode& n, SpacePoint x) {
    double b = n.t_min + n.slope * box_distance(x, n.lo, n.hi);
    return b - 1e-12 * std::abs(b);
}

bool in_star(std::span<const SimplexId> star, SimplexId s) {
    return std::binary_search(star.begin(), star.end(), s);
}

std::uint64_t spread_bits(std::uint32_t v) {
    std::uint64_t x = v;
    x = (x | (x << 16)) & 0x0000FFFF0000FFFFull;
    x = (x | (x << 8)) & 0x00FF00FF00FF00FFull;
    x = (x | (x << 4)) & 0x0F0F0F0F0F0F0F0Full;
    x = (x | (x << 2)) & 0x3333333333333333ull;
    x = (x | (x << 1)) & 0x5555555555555555ull;
    return x;
}

}  // namespace

double facet_entry_time(const Front& front, SimplexId s, double slope, SpacePoint x) {
    SpacetimeSimplex f = front.lifted(s);
    const auto& pts = f.points;
    if (f.count == 2) return segment_entry(pts[0], pts[1], slope, x);
    double best = std::min({segment_entry(pts[0], pts[1], slope, x), segment_entry(pts[1], pts[2], slope, x),
                            segment_entry(pts[0], pts[2], slope, x)});
    // x inside the triangle: the causal facet itself is the earliest point.
    SpacePoint a = pts[0].position, b = pts[1].position, c = pts[2].position;
    double det = cross(b - a, c - a);
    double l1 = cross(x - a, c - a) / det;
    double l2 = cross(b - a, x - a) / det;
    double l0 = 1.0 - l1 - l2;
    if (l0 >= 0.0 && l1 >= 0.0 && l2 >= 0.0) best = std::min(best, l0 * pts[0].time + l1 * pts[1].time + l2 * pts[2].time);
    return best;
}

ConeHierarchy ConeHierarchy::build(const Front& front, const SlopeField& field, int samples) {
    const int m = front.mesh().simplex_count();
    std::vector<double> slopes(m);
    for (SimplexId s = 0; s < m; ++s) slopes[s] = min_slope_over(field, front.lifted(s), samples, s).value;
    return build(front, std::move(slopes));
}

ConeHierarchy ConeHierarchy::build(const Front& front, std::vector<double> leaf_slopes) {
    const auto& mesh = front.mesh();
    const int m = mesh.simplex_count();
    if (static_cast<int>(leaf_slopes.size()) != m) throw InvalidArgument("one slope per facet required");
    ConeHierarchy h;
    h.slopes_ = std::move(leaf_slopes);
    h.leaf_.assign(m, -1);
    std::vector<SpacePoint> centroid(m);
    for (SimplexId s = 0; s < m; ++s) {
        SpacePoint c;
        for (VertexId v : mesh.simplex_span(s)) c = c + mesh.vertex(v);
        centroid[s] = (1.0 / mesh.simplex_size()) * c;
    }
    std::vector<std::uint64_t> key(m);
    SpacePoint lo = mesh.bbox_min(), hi = mesh.bbox_max();
    auto quantize = [](double v, double a, double b) {
        double u = b > a ? (v - a) / (b - a) : 0.0;
        return static_cast<std::uint32_t>(std::clamp(u, 0.0, 1.0) * 65535.0);
    };
    for (SimplexId s = 0; s < m; ++s) {
        std::uint32_t qx = quantize(centroid[s].x, lo.x, hi.x);
        std::uint32_t qy = quantize(centroid[s].y, lo.y, hi.y);
        key[s] = spread_bits(qx) | (spread_bits(qy) << 1);
    }
    std::vector<SimplexId> order(m);
    for (SimplexId s = 0; s < m; ++s) order[s] = s;
    if (mesh.dim() == 1) {
        std::sort(order.begin(), order.end(), [&](SimplexId a, SimplexId b) {
            return centroid[a].x != centroid[b].x ? centroid[a].x < centroid[b].x : a < b;
        });
    } else {
        std::sort(order.begin(), order.end(),
                  [&](SimplexId a, SimplexId b) { return key[a] != key[b] ? key[a] < key[b] : a < b; });
    }
    h.nodes_.reserve(2 * m);
    if (m > 0) h.root_ = h.build_range(front, order, 0, m, -1, 0);
    return h;
}

int ConeHierarchy::build_range(const Front& front, std::vector<SimplexId>& order, int lo, int hi, int parent,
                               int level) {
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    nodes_[id].parent = parent;
    depth_ = std::max(depth_, level);
    if (hi - lo == 1) {
        SimplexId s = order[lo];
        ConeNode& n = nodes_[id];
        n.facet = s;
        const auto& mesh = front.mesh();
        n.lo = n.hi = mesh.vertex(mesh.simplex(s)[0]);
        n.t_min = kInfinity;
        for (VertexId v : mesh.simplex_span(s)) {
            SpacePoint x = mesh.vertex(v);
            n.lo = {std::min(n.lo.x, x.x), std::min(n.lo.y, x.y)};
            n.hi = {std::max(n.hi.x, x.x), std::max(n.hi.y, x.y)};
            n.t_min = std::min(n.t_min, front.time(v));
        }
        n.slope = slopes_[s];
        leaf_[s] = id;
        return id;
    }
    int mid = lo + (hi - lo + 1) / 2;
    int left = build_range(front, order, lo, mid, id, level + 1);
    int right = build_range(front, order, mid, hi, id, level + 1);
    nodes_[id].left = left;
    nodes_[id].right = right;
    pull(id);
    return id;
}

void ConeHierarchy::pull(int id) {
    ConeNode& n = nodes_[id];
    const ConeNode& a = nodes_[n.left];
    const ConeNode& b = nodes_[n.right];
    n.lo = {std::min(a.lo.x, b.lo.x), std::min(a.lo.y, b.lo.y)};
    n.hi = {std::max(a.hi.x, b.hi.x), std::max(a.hi.y, b.hi.y)};
    n.t_min = std::min(a.t_min, b.t_min);
    n.slope = std::min(a.slope, b.slope);
}

void ConeHierarchy::recompute_path(int leaf) {
    for (int id = nodes_[leaf].parent; id >= 0; id = nodes_[id].parent) pull(id);
}

void ConeHierarchy::update_leaf(SimplexId facet, double slope) {
    if (facet < 0 || facet >= static_cast<int>(leaf_.size())) throw NotFound("unknown facet " + std::to_string(facet));
    int leaf = leaf_[facet];
    slopes_[facet] = slope;
    nodes_[leaf].slope = slope;
    recompute_path(leaf);
}

void ConeHierarchy::refresh_leaf(SimplexId facet, double slope, const Front& front) {
    if (facet < 0 || facet >= static_cast<int>(leaf_.size())) throw NotFound("unknown facet " + std::to_string(facet));
    int leaf = leaf_[facet];
    double t = kInfinity;
    for (VertexId v : front.mesh().simplex_span(facet)) t = std::min(t, front.time(v));
    nodes_[leaf].t_min = t;
    slopes_[facet] = slope;
    nodes_[leaf].slope = slope;
    recompute_path(leaf);
}

RayHit ConeHierarchy::ray_shoot(const Front& front, VertexId p) const {
    RayHit best;
    ++counters_.queries;
    if (root_ < 0) return best;
    auto star = front.mesh().vertex_star(p);
    SpacePoint x = front.mesh().vertex(p);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    queue.push({node_bound(nodes_[root_], x), root_});
    while (!queue.empty()) {
        auto [bound, id] = queue.top();
        queue.pop();
        if (bound > best.time) break;
        ++counters_.nodes_visited;
        const ConeNode& n = nodes_[id];
        if (n.facet >= 0) {
            if (in_star(star, n.facet)) continue;
            double t = facet_entry_time(front, n.facet, slopes_[n.facet], x);
            if (t < best.time || (t == best.time && n.facet < best.facet)) best = {t, n.facet};
            continue;
        }
        for (int c : {n.left, n.right}) {
            double b = node_bound(nodes_[c], x);
            if (b <= best.time) queue.push({b, c});
        }
    }
    return best;
}

SlopeHit ConeHierarchy::min_slope_intersecting(const Front& front, VertexId p, double top) const {
    SlopeHit best;
    ++counters_.queries;
    if (root_ < 0) return best;
    auto star = front.mesh().vertex_star(p);
    SpacePoint x = front.mesh().vertex(p);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    queue.push({nodes_[root_].slope, root_});
    while (!queue.empty()) {
        auto [slope, id] = queue.top();
        queue.pop();
        if (slope >= best.slope) break;
        ++counters_.nodes_visited;
        const ConeNode& n = nodes_[id];
        if (node_bound(n, x) > top) continue;
        if (n.facet >= 0) {
            if (in_star(star, n.facet)) continue;
            if (facet_entry_time(front, n.facet, slope, x) <= top) best = {slope, n.facet};
            continue;
        }
        for (int c : {n.left, n.right})
            if (nodes_[c].slope < best.slope) queue.push({nodes_[c].slope, c});
    }
    return best;
}

RayHit exhaustive_ray_shoot(const Front& front, std::span<const double> slopes, VertexId p, kernels::Exec exec) {
    auto star = front.mesh().vertex_star(p);
    SpacePoint x = front.mesh().vertex(p);
    auto [t, s] = kernels::min_by_key(
        front.mesh().simplex_count(),
        [&](std::ptrdiff_t i) {
            auto f = static_cast<SimplexId>(i);
            return in_star(star, f) ? kInfinity : facet_entry_time(front, f, slopes[f], x);
        },
        exec);
    return s < 0 ? RayHit{} : RayHit{t, static_cast<SimplexId>(s)};
}

SlopeHit exhaustive_min_slope(const Front& front, std::span<const double> slopes, VertexId p, double top,
                              kernels::Exec exec) {
    auto star = front.mesh().vertex_star(p);
    SpacePoint x = front.mesh().vertex(p);
    auto [v, s] = kernels::min_by_key(
        front.mesh().simplex_count(),
        [&](std::ptrdiff_t i) {
            auto f = static_cast<SimplexId>(i);
            if (in_star(star, f)) return kInfinity;
            return facet_entry_time(front, f, slopes[f], x) <= top ? slopes[f] : kInfinity;
        },
        exec);
    return s < 0 ? SlopeHit{} : SlopeHit{v, static_cast<SimplexId>(s)};
}

}  // namespace tent
