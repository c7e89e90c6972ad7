#include "tent/spacetime_mesh.hpp"

#include <algorithm>
#include <cmath>

#include "tent/errors.hpp"

namespace tent {

SpacetimeMesh::SpacetimeMesh(const SpaceMesh& mesh, std::span<const double> initial_times) : dim_(mesh.dim()) {
    const int n = mesh.vertex_count();
    vertices_.reserve(n);
    front_vertex_.resize(n);
    for (VertexId v = 0; v < n; ++v) {
        vertices_.push_back({mesh.vertex(v), initial_times[v]});
        front_vertex_[v] = v;
    }
    facet_patch_.assign(mesh.simplex_count(), -1);
    facet_element_.assign(mesh.simplex_count(), -1);
}

double spacetime_volume(std::span<const EventPoint> pts) {
    if (pts.size() == 3) {
        double ax = pts[1].position.x - pts[0].position.x, at = pts[1].time - pts[0].time;
        double bx = pts[2].position.x - pts[0].position.x, bt = pts[2].time - pts[0].time;
        return 0.5 * std::abs(ax * bt - at * bx);
    }
    if (pts.size() != 4) throw InvalidArgument("spacetime_volume needs 3 or 4 points");
    double m[3][3];
    for (int i = 0; i < 3; ++i) {
        m[i][0] = pts[i + 1].position.x - pts[0].position.x;
        m[i][1] = pts[i + 1].position.y - pts[0].position.y;
        m[i][2] = pts[i + 1].time - pts[0].time;
    }
    double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                 m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    return std::abs(det) / 6.0;
}

const Patch& SpacetimeMesh::add_patch(const SpaceMesh& mesh, VertexId p, double t_from, double height) {
    Patch patch;
    patch.id = static_cast<int>(patches_.size());
    patch.vertex = p;
    patch.t_from = t_from;
    patch.height = height;
    patch.bottom = front_vertex_[p];
    patch.top = static_cast<int>(vertices_.size());
    vertices_.push_back({mesh.vertex(p), t_from + height});
    auto star = mesh.vertex_star(p);
    patch.star.assign(star.begin(), star.end());
    for (SimplexId s : star) {
        FacetIds in, out;
        ElementIds e;
        e.push(patch.top);
        e.push(patch.bottom);
        std::vector<int> others;
        for (VertexId v : mesh.simplex_span(s)) {
            int id = v == p ? -1 : front_vertex_[v];
            in.push(v == p ? patch.bottom : id);
            out.push(v == p ? patch.top : id);
            if (v != p) {
                e.push(id);
                others.push_back(id);
            }
        }
        for (int o : others) {
            FacetIds f;
            f.push(patch.bottom);
            f.push(patch.top);
            if (dim_ == 2) f.push(o);
            if (std::find_if(patch.implicit.begin(), patch.implicit.end(), [&](const FacetIds& g) {
                    return std::equal(g.ids.begin(), g.ids.begin() + g.count, f.ids.begin(), f.ids.begin() + f.count);
                }) == patch.implicit.end())
                patch.implicit.push_back(f);
            if (dim_ == 1) break;  // the tentpole itself is the only vertical face
        }
        Element el;
        el.vertices = e;
        el.patch = patch.id;
        el.space_simplex = s;
        el.volume = dim_ == 1 ? 0.5 * height * mesh.simplex_measure(s) : height * mesh.simplex_measure(s) / 3.0;
        patch.inflow.push_back(in);
        patch.outflow.push_back(out);
        patch.inflow_patches.push_back(facet_patch_[s]);
        if (facet_element_[s] >= 0) patch.inflow_elements.push_back(facet_element_[s]);
        patch.elements.push_back(static_cast<int>(elements_.size()));
        facet_patch_[s] = patch.id;
        facet_element_[s] = static_cast<int>(elements_.size());
        elements_.push_back(el);
    }
    front_vertex_[p] = patch.top;
    patches_.push_back(std::move(patch));
    return patches_.back();
}

double SpacetimeMesh::total_volume() const {
    double sum = 0.0;
    for (const auto& e : elements_) sum += e.volume;
    return sum;
}

bool SpacetimeMesh::dependence_acyclic() const {
    for (const auto& p : patches_)
        for (int q : p.inflow_patches)
            if (q >= p.id) return false;
    return true;
}

}  // namespace tent
