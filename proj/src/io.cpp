#include "tent/io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "tent/errors.hpp"

namespace tent {

namespace {

// Referenced vertices in creation order, and the old -> new id map.
std::vector<int> compact_ids(const SpacetimeMesh& mesh, std::vector<int>& order) {
    std::vector<int> remap(mesh.vertices().size(), -1);
    std::vector<char> used(mesh.vertices().size(), 0);
    for (const auto& e : mesh.elements())
        for (int v : e.vertices.span()) used[v] = 1;
    for (std::size_t v = 0; v < used.size(); ++v)
        if (used[v]) {
            remap[v] = static_cast<int>(order.size());
            order.push_back(static_cast<int>(v));
        }
    return remap;
}

void write_coords(std::ostream& out, const EventPoint& p, int space_dim) {
    out << format_real(p.position.x);
    if (space_dim == 2) out << ' ' << format_real(p.position.y);
    out << ' ' << format_real(p.time);
}

}  // namespace

void write_spacetime_mesh(const SpacetimeMesh& mesh, std::ostream& out) {
    out << "stdim " << mesh.space_dim() + 1 << '\n';
    std::vector<int> order;
    std::vector<int> remap = compact_ids(mesh, order);
    for (int v : order) {
        out << "v ";
        write_coords(out, mesh.vertices()[v], mesh.space_dim());
        out << '\n';
    }
    for (const auto& e : mesh.elements()) {
        out << 'e';
        for (int v : e.vertices.span()) out << ' ' << remap[v];
        out << ' ' << e.patch << '\n';
    }
}

LoadedSpacetimeMesh read_spacetime_mesh(std::istream& in) {
    LoadedSpacetimeMesh mesh;
    std::string text;
    int lineno = 0;
    bool header = false;
    while (std::getline(in, text)) {
        ++lineno;
        std::istringstream ss(text.substr(0, text.find('#')));
        std::string tag;
        if (!(ss >> tag)) continue;
        if (tag == "stdim") {
            if (header || !(ss >> mesh.stdim) || (mesh.stdim != 2 && mesh.stdim != 3))
                throw ValidationError("bad stdim line", lineno);
            header = true;
            continue;
        }
        if (!header) throw ValidationError("missing stdim header", lineno);
        if (tag == "v") {
            EventPoint p;
            bool ok = mesh.stdim == 2 ? static_cast<bool>(ss >> p.position.x >> p.time)
                                      : static_cast<bool>(ss >> p.position.x >> p.position.y >> p.time);
            if (!ok) throw ValidationError("bad vertex line", lineno);
            mesh.vertices.push_back(p);
        } else if (tag == "e") {
            std::vector<long> vals;
            long x;
            while (ss >> x) vals.push_back(x);
            if (static_cast<int>(vals.size()) != mesh.stdim + 2) throw ValidationError("bad element line", lineno);
            LoadedElement e;
            for (int i = 0; i <= mesh.stdim; ++i) {
                if (vals[i] < 0 || vals[i] >= static_cast<long>(mesh.vertices.size()))
                    throw ValidationError("element references unknown vertex", lineno);
                e.vertices.push_back(static_cast<int>(vals[i]));
            }
            e.patch = static_cast<int>(vals.back());
            mesh.elements.push_back(std::move(e));
        } else {
            throw ValidationError("unknown record '" + tag + "'", lineno);
        }
    }
    if (!header) throw ValidationError("missing stdim header");
    return mesh;
}

double LoadedSpacetimeMesh::element_volume(std::size_t e) const {
    std::vector<EventPoint> pts;
    for (int v : elements.at(e).vertices) pts.push_back(vertices[v]);
    return spacetime_volume(pts);
}

void write_vtk(const SpacetimeMesh& mesh, std::ostream& out) {
    std::vector<int> order;
    std::vector<int> remap = compact_ids(mesh, order);
    out << "# vtk DataFile Version 3.0\nspacetime mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << order.size() << " double\n";
    for (int v : order) {
        const EventPoint& p = mesh.vertices()[v];
        if (mesh.space_dim() == 1)
            out << format_real(p.position.x) << ' ' << format_real(p.time) << " 0\n";
        else
            out << format_real(p.position.x) << ' ' << format_real(p.position.y) << ' ' << format_real(p.time) << '\n';
    }
    auto elements = mesh.elements();
    int per = mesh.space_dim() + 2;
    out << "CELLS " << elements.size() << ' ' << elements.size() * (per + 1) << '\n';
    for (const auto& e : elements) {
        out << per;
        for (int v : e.vertices.span()) out << ' ' << remap[v];
        out << '\n';
    }
    out << "CELL_TYPES " << elements.size() << '\n';
    for (std::size_t i = 0; i < elements.size(); ++i) out << (per == 3 ? 5 : 10) << '\n';
    out << "CELL_DATA " << elements.size() << "\nSCALARS patch int 1\nLOOKUP_TABLE default\n";
    for (const auto& e : elements) out << e.patch << '\n';
}

void KeyValueWriter::add(const std::string& key, double value) { add(key, format_real(value)); }

void KeyValueWriter::write(std::ostream& out) const {
    for (const auto& [k, v] : rows_) out << k << ' ' << v << '\n';
}

}  // namespace tent
