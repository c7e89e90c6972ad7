#pragma once

#include <cmath>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tent/errors.hpp"
#include "tent/space_mesh.hpp"
#include "tent/wavespeed_field.hpp"

namespace tent::testing {

inline std::string fixture(const std::string& name) { return std::string(TENT_FIXTURE_DIR) + "/" + name; }

inline std::shared_ptr<const SpaceMesh> load_fixture(const std::string& name) {
    return std::make_shared<const SpaceMesh>(load_mesh_file(fixture(name)));
}

inline std::shared_ptr<const SpaceMesh> line_mesh(const std::vector<double>& xs) {
    std::vector<SpacePoint> v;
    std::vector<std::vector<VertexId>> s;
    for (double x : xs) v.push_back({x, 0.0});
    for (int i = 0; i + 1 < static_cast<int>(xs.size()); ++i) s.push_back({i, i + 1});
    return std::make_shared<const SpaceMesh>(SpaceMesh::build(1, v, s));
}

inline std::shared_ptr<const SpaceMesh> uniform_line(int segments, double length) {
    std::vector<double> xs;
    for (int i = 0; i <= segments; ++i) xs.push_back(length * i / segments);
    return line_mesh(xs);
}

/// Segment lengths uniform in [0.5, 1.5].
inline std::shared_ptr<const SpaceMesh> random_line(std::mt19937_64& rng, int segments) {
    std::uniform_real_distribution<double> len(0.5, 1.5);
    std::vector<double> xs{0.0};
    for (int i = 0; i < segments; ++i) xs.push_back(xs.back() + len(rng));
    return line_mesh(xs);
}

/// nx x ny squares of side h. Diagonals: all (0,0)-(1,1) unless `alternate`
/// (union-jack) or `rng` given (random per square). Interior vertices are
/// jittered by up to `jitter * h`.
inline std::shared_ptr<const SpaceMesh> grid_mesh(int nx, int ny, double h, bool alternate = false,
                                                  std::mt19937_64* rng = nullptr, double jitter = 0.0) {
    std::vector<SpacePoint> v;
    std::uniform_real_distribution<double> j(-jitter * h, jitter * h);
    for (int y = 0; y <= ny; ++y)
        for (int x = 0; x <= nx; ++x) {
            SpacePoint p{x * h, y * h};
            if (rng && jitter > 0.0 && x > 0 && x < nx && y > 0 && y < ny) p = {p.x + j(*rng), p.y + j(*rng)};
            v.push_back(p);
        }
    auto id = [&](int x, int y) { return y * (nx + 1) + x; };
    std::vector<std::vector<VertexId>> s;
    std::bernoulli_distribution coin(0.5);
    for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x) {
            int a = id(x, y), b = id(x + 1, y), c = id(x + 1, y + 1), d = id(x, y + 1);
            bool main = rng ? coin(*rng) : (!alternate || (x + y) % 2 == 0);
            if (main) {
                s.push_back({a, b, c});
                s.push_back({a, c, d});
            } else {
                s.push_back({a, b, d});
                s.push_back({b, c, d});
            }
        }
    return std::make_shared<const SpaceMesh>(SpaceMesh::build(2, v, s));
}

/// Rows of isosceles triangles with base `base` and height `h`; every
/// triangle is obtuse when h < base / 2.
inline std::shared_ptr<const SpaceMesh> obtuse_strip(int n, int rows, double h, double base = 1.0) {
    std::vector<SpacePoint> v;
    std::vector<std::vector<int>> row_ids;
    for (int k = 0; k < rows; ++k) {
        std::vector<int> ids;
        int count = k % 2 == 0 ? n + 1 : n;
        for (int i = 0; i < count; ++i) {
            double x = (k % 2 == 0 ? i : i + 0.5) * base;
            ids.push_back(static_cast<int>(v.size()));
            v.push_back({x, k * h});
        }
        row_ids.push_back(ids);
    }
    std::vector<std::vector<VertexId>> s;
    for (int k = 0; k + 1 < rows; ++k) {
        const auto& lo = row_ids[k];
        const auto& hi = row_ids[k + 1];
        if (lo.size() > hi.size()) {
            for (std::size_t i = 0; i + 1 < lo.size(); ++i) s.push_back({lo[i], lo[i + 1], hi[i]});
            for (std::size_t i = 0; i + 1 < hi.size(); ++i) s.push_back({hi[i], lo[i + 1], hi[i + 1]});
        } else {
            for (std::size_t i = 0; i + 1 < hi.size(); ++i) s.push_back({lo[i], hi[i + 1], hi[i]});
            for (std::size_t i = 0; i + 1 < lo.size(); ++i) s.push_back({lo[i], lo[i + 1], hi[i + 1]});
        }
    }
    return std::make_shared<const SpaceMesh>(SpaceMesh::build(2, v, s));
}

inline std::shared_ptr<SlopeField> field_from(const std::string& text, std::shared_ptr<const SpaceMesh> mesh) {
    std::istringstream in(text);
    return load_field(in, std::move(mesh), TENT_FIXTURE_DIR);
}

/// Per-element slopes from `values`, cycled.
inline std::shared_ptr<TableField> table_field(std::shared_ptr<const SpaceMesh> mesh, std::vector<double> values,
                                               std::vector<ScriptRow> script = {}) {
    std::vector<double> base(mesh->simplex_count());
    for (std::size_t i = 0; i < base.size(); ++i) base[i] = values[i % values.size()];
    return std::make_shared<TableField>(mesh, base, std::move(script));
}

}  // namespace tent::testing
