#include "tent/front.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "tent/errors.hpp"

namespace tent {

SpacePoint linear_gradient(std::span<const EventPoint> pts) {
    if (pts.size() == 2) {
        SpacePoint d = pts[1].position - pts[0].position;
        double len2 = dot(d, d);
        if (!(len2 > 0.0)) throw DegenerateSimplex("zero-length segment");
        return ((pts[1].time - pts[0].time) / len2) * d;
    }
    if (pts.size() != 3) throw InvalidArgument("linear_gradient needs 2 or 3 points");
    SpacePoint e1 = pts[1].position - pts[0].position;
    SpacePoint e2 = pts[2].position - pts[0].position;
    double dt1 = pts[1].time - pts[0].time;
    double dt2 = pts[2].time - pts[0].time;
    double det = cross(e1, e2);
    require_nondegenerate(pts[0].position, pts[1].position, pts[2].position);
    return {(dt1 * e2.y - e1.y * dt2) / det, (e1.x * dt2 - dt1 * e2.x) / det};
}

Front::Front(std::shared_ptr<const SpaceMesh> mesh, std::vector<double> times) : mesh_(std::move(mesh)) {
    const int n = mesh_->vertex_count();
    if (times.empty()) times.assign(n, 0.0);
    if (static_cast<int>(times.size()) != n) throw ValidationError("front needs one time per vertex");
    for (double t : times)
        if (!std::isfinite(t) || t < 0.0) throw ValidationError("front times must be finite and non-negative");
    times_ = std::move(times);
    is_min_.assign(n, 0);
    for (VertexId v = 0; v < n; ++v) refresh_minimum(v);
}

bool Front::is_local_minimum(VertexId v) const {
    for (VertexId q : mesh_->neighbors(v))
        if (times_[q] < times_[v]) return false;
    return true;
}

void Front::refresh_minimum(VertexId v) {
    bool now = is_local_minimum(v);
    if (is_min_[v]) minima_.erase({times_[v], v});
    is_min_[v] = now ? 1 : 0;
    if (now) minima_.insert({times_[v], v});
}

std::vector<VertexId> Front::local_minima() const {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < mesh_->vertex_count(); ++v)
        if (is_min_[v]) out.push_back(v);
    return out;
}

double Front::max_time() const { return *std::max_element(times_.begin(), times_.end()); }

Front Front::advanced(VertexId p, double dt) const {
    Front next = *this;
    next.advance(p, dt);
    return next;
}

void Front::advance(VertexId p, double dt) {
    if (!(dt >= 0.0) || !std::isfinite(dt)) throw InvalidArgument("advance needs a finite dt >= 0");
    if (p < 0 || p >= mesh_->vertex_count()) throw NotFound("unknown vertex " + std::to_string(p));
    if (dt == 0.0) return;
    if (is_min_[p]) minima_.erase({times_[p], p});
    is_min_[p] = 0;
    times_[p] += dt;
    refresh_minimum(p);
    for (VertexId q : mesh_->neighbors(p)) refresh_minimum(q);
}

double Front::edge_gradient(VertexId q, VertexId r) const {
    if (!mesh_->is_edge(q, r)) throw NotFound("not a mesh edge");
    return std::abs(times_[r] - times_[q]) / distance(mesh_->vertex(q), mesh_->vertex(r));
}

SpacetimeSimplex Front::lifted(SimplexId s) const {
    SpacetimeSimplex out;
    for (VertexId v : mesh_->simplex_span(s)) out.push(event(v));
    return out;
}

SpacePoint Front::facet_gradient(SimplexId s) const { return linear_gradient(lifted(s).vertices()); }

FacetLift Front::lift(SimplexId s) const {
    FacetLift f;
    f.simplex = s;
    f.lifted = lifted(s);
    f.gradient = linear_gradient(f.lifted.vertices());
    int k = 0;
    for (int i = 0; i < f.lifted.count; ++i)
        for (int j = i + 1; j < f.lifted.count; ++j) {
            const auto& a = f.lifted.points[i];
            const auto& b = f.lifted.points[j];
            f.edge_gradients[k++] = std::abs(b.time - a.time) / distance(a.position, b.position);
        }
    return f;
}

void write_front_snapshot(const Front& front, std::ostream& out) {
    for (VertexId v = 0; v < front.mesh().vertex_count(); ++v) out << "t " << v << ' ' << format_real(front.time(v)) << '\n';
}

void write_terrain(const Front& front, std::ostream& out) {
    const auto& mesh = front.mesh();
    for (VertexId v = 0; v < mesh.vertex_count(); ++v) {
        auto p = mesh.vertex(v);
        out << "v " << format_real(p.x);
        if (mesh.dim() == 2) out << ' ' << format_real(p.y);
        out << ' ' << format_real(front.time(v)) << '\n';
    }
    for (SimplexId s = 0; s < mesh.simplex_count(); ++s) {
        out << 'f';
        for (VertexId v : mesh.oriented(s)) out << ' ' << v;
        out << '\n';
    }
}

std::vector<double> read_front_snapshot(std::istream& in, int vertex_count) {
    std::vector<double> times(vertex_count, std::nan(""));
    std::string text;
    int lineno = 0;
    while (std::getline(in, text)) {
        ++lineno;
        std::istringstream ss(text.substr(0, text.find('#')));
        std::string tag;
        if (!(ss >> tag)) continue;
        long v = -1;
        double t = 0.0;
        if (tag != "t" || !(ss >> v >> t)) throw ValidationError("expected 't <vertex> <time>'", lineno);
        if (v < 0 || v >= vertex_count) throw ValidationError("unknown vertex", lineno);
        if (!std::isnan(times[v])) throw ValidationError("vertex listed twice", lineno);
        times[v] = t;
    }
    for (double t : times)
        if (std::isnan(t)) throw ValidationError("front snapshot does not list every vertex");
    return times;
}

}  // namespace tent
