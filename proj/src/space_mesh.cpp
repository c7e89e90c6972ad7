#include "tent/space_mesh.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "tent/errors.hpp"
#include "tent/kernels.hpp"

namespace tent {

namespace {

int line_of(std::span<const int> lines, std::size_t i) {
    return i < lines.size() ? lines[i] : 0;
}

// Parity of the permutation sorting `v`.
bool odd_permutation(std::vector<VertexId> v) {
    bool odd = false;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j + 1 < v.size() - i; ++j)
            if (v[j] > v[j + 1]) {
                std::swap(v[j], v[j + 1]);
                odd = !odd;
            }
    return odd;
}

double pairwise_diameter(std::span<const SpacePoint> pts) {
    const auto n = static_cast<std::ptrdiff_t>(pts.size());
    if (n < 2) return 0.0;
    return kernels::max_of(n, [&](std::ptrdiff_t i) {
        double best = 0.0;
        for (std::ptrdiff_t j = i + 1; j < n; ++j) best = std::max(best, distance(pts[i], pts[j]));
        return best;
    });
}

}  // namespace

SpaceMesh SpaceMesh::build(int dim, std::vector<SpacePoint> vertices,
                           std::vector<std::vector<VertexId>> simplices, std::span<const int> lines) {
    if (dim != 1 && dim != 2) throw ValidationError("dimension must be 1 or 2");
    if (simplices.empty()) throw ValidationError("mesh has no simplices");
    for (const auto& p : vertices)
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw ValidationError("non-finite vertex coordinate");

    SpaceMesh m;
    m.dim_ = dim;
    m.vertices_ = std::move(vertices);
    const int n = m.vertex_count();

    std::set<SimplexVertices> seen;
    std::vector<int> referenced(n, 0);
    double mesh_diam = pairwise_diameter(m.vertices_);
    for (std::size_t s = 0; s < simplices.size(); ++s) {
        const auto& in = simplices[s];
        const int line = line_of(lines, s);
        if (static_cast<int>(in.size()) != dim + 1)
            throw ValidationError("simplex needs " + std::to_string(dim + 1) + " vertex indices", line);
        for (VertexId v : in)
            if (v < 0 || v >= n) throw ValidationError("vertex index out of range", line);
        std::vector<VertexId> sorted = in;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw ValidationError("repeated vertex index in simplex", line);
        SimplexVertices key{-1, -1, -1};
        std::copy(sorted.begin(), sorted.end(), key.begin());
        if (!seen.insert(key).second) throw ValidationError("duplicate simplex", line);

        double width = 0.0;
        double measure = 0.0;
        if (dim == 1) {
            measure = distance(m.vertices_[key[0]], m.vertices_[key[1]]);
            width = measure;
            if (!(measure > kDegenerateRatio * mesh_diam) || measure == 0.0)
                throw ValidationError("degenerate segment", line);
        } else {
            SpacePoint a = m.vertices_[key[0]], b = m.vertices_[key[1]], c = m.vertices_[key[2]];
            try {
                width = triangle_width(a, b, c);
            } catch (const DegenerateSimplex&) {
                throw ValidationError("degenerate triangle", line);
            }
            measure = triangle_area(a, b, c);
        }
        for (VertexId v : in) referenced[v] = 1;
        m.simplices_.push_back(key);
        m.flipped_.push_back(odd_permutation(in) ? 1 : 0);
        m.widths_.push_back(width);
        m.measures_.push_back(measure);
    }
    for (int v = 0; v < n; ++v)
        if (!referenced[v]) throw ValidationError("vertex " + std::to_string(v) + " is not used by any simplex");

    m.compute_adjacency();
    m.validate_manifold(lines);
    m.stats_ = mesh_stats(m);
    m.lo_ = m.hi_ = m.vertices_.front();
    for (const auto& p : m.vertices_) {
        m.lo_ = {std::min(m.lo_.x, p.x), std::min(m.lo_.y, p.y)};
        m.hi_ = {std::max(m.hi_.x, p.x), std::max(m.hi_.y, p.y)};
    }
    return m;
}

void SpaceMesh::compute_adjacency() {
    const int n = vertex_count();
    stars_.assign(n, {});
    std::vector<std::set<VertexId>> nbr(n);
    for (SimplexId s = 0; s < simplex_count(); ++s) {
        auto vs = simplex_span(s);
        for (VertexId a : vs) {
            stars_[a].push_back(s);
            for (VertexId b : vs)
                if (a != b) nbr[a].insert(b);
        }
    }
    neighbors_.resize(n);
    for (int v = 0; v < n; ++v) neighbors_[v].assign(nbr[v].begin(), nbr[v].end());
}

void SpaceMesh::validate_manifold(std::span<const int> lines) const {
    if (dim_ == 1) {
        for (VertexId v = 0; v < vertex_count(); ++v)
            if (stars_[v].size() > 2)
                throw ValidationError("non-manifold: vertex " + std::to_string(v) + " has more than two segments",
                                      line_of(lines, stars_[v][2]));
        // Segments may only touch at shared endpoints.
        std::vector<SimplexId> order(simplex_count());
        std::iota(order.begin(), order.end(), 0);
        auto left = [&](SimplexId s) { return std::min(vertices_[simplices_[s][0]].x, vertices_[simplices_[s][1]].x); };
        auto right = [&](SimplexId s) { return std::max(vertices_[simplices_[s][0]].x, vertices_[simplices_[s][1]].x); };
        std::sort(order.begin(), order.end(), [&](SimplexId a, SimplexId b) { return left(a) < left(b); });
        for (std::size_t i = 1; i < order.size(); ++i)
            if (left(order[i]) < right(order[i - 1]))
                throw ValidationError("overlapping segments", line_of(lines, order[i]));
        return;
    }

    std::map<std::pair<VertexId, VertexId>, std::vector<SimplexId>> edges;
    for (SimplexId s = 0; s < simplex_count(); ++s) {
        const auto& t = simplices_[s];
        edges[{t[0], t[1]}].push_back(s);
        edges[{t[0], t[2]}].push_back(s);
        edges[{t[1], t[2]}].push_back(s);
    }
    auto third = [&](SimplexId s, VertexId a, VertexId b) {
        for (VertexId v : simplex_span(s))
            if (v != a && v != b) return v;
        return -1;
    };
    for (const auto& [e, tris] : edges) {
        if (tris.size() > 2)
            throw ValidationError("non-manifold: edge shared by more than two triangles", line_of(lines, tris[2]));
        if (tris.size() == 2) {
            SpacePoint a = vertices_[e.first], b = vertices_[e.second];
            double s0 = cross(b - a, vertices_[third(tris[0], e.first, e.second)] - a);
            double s1 = cross(b - a, vertices_[third(tris[1], e.first, e.second)] - a);
            if (s0 * s1 >= 0.0) throw ValidationError("overlapping triangles", line_of(lines, tris[1]));
        }
    }
    // The star of every vertex must be a single edge-connected fan.
    for (VertexId v = 0; v < vertex_count(); ++v) {
        const auto& star = stars_[v];
        std::vector<int> comp(star.size());
        std::iota(comp.begin(), comp.end(), 0);
        std::function<int(int)> find = [&](int i) { return comp[i] == i ? i : comp[i] = find(comp[i]); };
        for (std::size_t i = 0; i < star.size(); ++i)
            for (std::size_t j = i + 1; j < star.size(); ++j) {
                int shared = 0;
                for (VertexId a : simplex_span(star[i]))
                    for (VertexId b : simplex_span(star[j])) shared += (a == b);
                if (shared == 2) comp[find(static_cast<int>(i))] = find(static_cast<int>(j));
            }
        for (std::size_t i = 1; i < star.size(); ++i)
            if (find(static_cast<int>(i)) != find(0))
                throw ValidationError("non-manifold: star of vertex " + std::to_string(v) + " is not a fan",
                                      line_of(lines, star[i]));
    }
}

std::vector<VertexId> SpaceMesh::oriented(SimplexId s) const {
    auto span = simplex_span(s);
    std::vector<VertexId> out(span.begin(), span.end());
    if (flipped_[s]) std::swap(out[out.size() - 2], out[out.size() - 1]);
    return out;
}

std::span<const SimplexId> SpaceMesh::vertex_star(VertexId v) const {
    if (v < 0 || v >= vertex_count()) throw NotFound("unknown vertex " + std::to_string(v));
    return stars_[v];
}

std::span<const VertexId> SpaceMesh::neighbors(VertexId v) const {
    if (v < 0 || v >= vertex_count()) throw NotFound("unknown vertex " + std::to_string(v));
    return neighbors_[v];
}

bool SpaceMesh::is_edge(VertexId a, VertexId b) const {
    if (a < 0 || a >= vertex_count() || b < 0 || b >= vertex_count()) return false;
    return std::binary_search(neighbors_[a].begin(), neighbors_[a].end(), b);
}

SimplexId SpaceMesh::locate(SpacePoint x, double tol) const {
    const double slack = tol * std::max(1.0, stats_.diameter);
    for (SimplexId s = 0; s < simplex_count(); ++s) {
        const auto& t = simplices_[s];
        if (dim_ == 1) {
            double a = vertices_[t[0]].x, b = vertices_[t[1]].x;
            if (x.x >= std::min(a, b) - slack && x.x <= std::max(a, b) + slack) return s;
        } else {
            SpacePoint a = vertices_[t[0]], b = vertices_[t[1]], c = vertices_[t[2]];
            double area2 = cross(b - a, c - a);
            double l0 = cross(b - x, c - x) / area2;
            double l1 = cross(c - x, a - x) / area2;
            double l2 = 1.0 - l0 - l1;
            double rel = tol * 10.0;
            if (l0 >= -rel && l1 >= -rel && l2 >= -rel) return s;
        }
    }
    return -1;
}

MeshStats mesh_stats(const SpaceMesh& mesh) {
    MeshStats st;
    st.wmin = std::numeric_limits<double>::infinity();
    for (SimplexId s = 0; s < mesh.simplex_count(); ++s) st.wmin = std::min(st.wmin, mesh.simplex_width(s));
    st.diameter = pairwise_diameter(mesh.vertices());
    for (VertexId v = 0; v < mesh.vertex_count(); ++v)
        st.max_degree = std::max(st.max_degree, static_cast<int>(mesh.vertex_star(v).size()));
    return st;
}

std::string format_real(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::string body = line.substr(0, line.find('#'));
    std::istringstream ss(body);
    std::vector<std::string> out;
    for (std::string tok; ss >> tok;) out.push_back(tok);
    return out;
}

double parse_real(const std::string& tok, int line) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (!tok.empty() && tok[0] == '+') ++first;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v))
        throw ValidationError("bad number '" + tok + "'", line);
    return v;
}

int parse_int(const std::string& tok, int line) {
    int v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw ValidationError("bad integer '" + tok + "'", line);
    return v;
}

}  // namespace

SpaceMesh load_mesh(std::istream& in) {
    int dim = 0;
    std::vector<SpacePoint> verts;
    std::vector<std::vector<VertexId>> simplices;
    std::vector<int> lines;
    std::string text;
    int lineno = 0;
    while (std::getline(in, text)) {
        ++lineno;
        auto tok = tokenize(text);
        if (tok.empty()) continue;
        if (tok[0] == "dim") {
            if (dim != 0) throw ValidationError("repeated dim header", lineno);
            if (tok.size() != 2) throw ValidationError("expected 'dim <d>'", lineno);
            dim = parse_int(tok[1], lineno);
            if (dim != 1 && dim != 2) throw ValidationError("dimension must be 1 or 2", lineno);
            continue;
        }
        if (dim == 0) throw ValidationError("missing 'dim' header", lineno);
        if (tok[0] == "v") {
            if (static_cast<int>(tok.size()) != dim + 1)
                throw ValidationError("vertex needs " + std::to_string(dim) + " coordinate(s)", lineno);
            SpacePoint p{parse_real(tok[1], lineno), dim == 2 ? parse_real(tok[2], lineno) : 0.0};
            verts.push_back(p);
        } else if (tok[0] == "s") {
            std::vector<VertexId> ids;
            for (std::size_t i = 1; i < tok.size(); ++i) ids.push_back(parse_int(tok[i], lineno));
            if (static_cast<int>(ids.size()) != dim + 1)
                throw ValidationError("simplex needs " + std::to_string(dim + 1) + " vertex indices", lineno);
            simplices.push_back(std::move(ids));
            lines.push_back(lineno);
        } else {
            throw ValidationError("unknown record '" + tok[0] + "'", lineno);
        }
    }
    if (dim == 0) throw ValidationError("missing 'dim' header", lineno);
    return SpaceMesh::build(dim, std::move(verts), std::move(simplices), lines);
}

SpaceMesh load_mesh_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open mesh file '" + path + "'");
    return load_mesh(in);
}

void save_mesh(const SpaceMesh& mesh, std::ostream& out) {
    out << "dim " << mesh.dim() << '\n';
    for (const auto& p : mesh.vertices()) {
        out << "v " << format_real(p.x);
        if (mesh.dim() == 2) out << ' ' << format_real(p.y);
        out << '\n';
    }
    for (SimplexId s = 0; s < mesh.simplex_count(); ++s) {
        out << 's';
        for (VertexId v : mesh.oriented(s)) out << ' ' << v;
        out << '\n';
    }
}

}  // namespace tent
