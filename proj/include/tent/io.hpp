#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "tent/spacetime_mesh.hpp"

namespace tent {

// Spacetime mesh document:
//   stdim <d+1>
//   v <x> [<y>] <t>          one per referenced vertex, in creation order
//   e <i> <j> <k> [<l>] <patch>
// Vertex ids in `e` lines index the `v` lines from 0. An empty mesh is the
// header alone.
void write_spacetime_mesh(const SpacetimeMesh& mesh, std::ostream& out);

struct LoadedElement {
    std::vector<int> vertices;
    int patch = -1;
};

struct LoadedSpacetimeMesh {
    int stdim = 2;
    std::vector<EventPoint> vertices;
    std::vector<LoadedElement> elements;

    double element_volume(std::size_t e) const;
};

LoadedSpacetimeMesh read_spacetime_mesh(std::istream& in);

/// Legacy ASCII VTK unstructured grid (triangles or tetrahedra; time is the
/// last coordinate) with the patch id as cell data.
void write_vtk(const SpacetimeMesh& mesh, std::ostream& out);

/// Ordered `key value` lines.
class KeyValueWriter {
public:
    void add(const std::string& key, const std::string& value) { rows_.emplace_back(key, value); }
    void add(const std::string& key, double value);
    void add(const std::string& key, long long value) { add(key, std::to_string(value)); }
    void write(std::ostream& out) const;

private:
    std::vector<std::pair<std::string, std::string>> rows_;
};

}  // namespace tent
