#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "support.hpp"
#include "tent/errors.hpp"
#include "tent/space_mesh.hpp"

using namespace tent;
using namespace tent::testing;

namespace {

SpaceMesh parse(const std::string& text) {
    std::istringstream in(text);
    return load_mesh(in);
}

int error_line(const std::string& text) {
    try {
        parse(text);
    } catch (const ValidationError& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST_CASE("load_mesh examples") {
    auto line = load_fixture("line10.mesh");
    CHECK(line->wmin() == 1.0);
    CHECK(line->diameter() == 10.0);
    CHECK(line->max_degree() == 2);

    auto square = parse("dim 2\nv 0 0\nv 1 0\nv 1 1\nv 0 1\ns 0 1 2\ns 0 2 3\n");
    CHECK(square.max_degree() == 2);
    CHECK(square.vertex_star(0).size() == 2);
    CHECK(square.vertex_star(2).size() == 2);
    CHECK(square.vertex_star(1).size() == 1);
    CHECK(square.wmin() == doctest::Approx(std::sqrt(2.0) / 2.0));

    CHECK(error_line("dim 2\nv 0 0\nv 1 0\nv 0 1\ns 0 0 1\n") == 5);
}

TEST_CASE("load_mesh rejects malformed and non-manifold input") {
    CHECK(error_line("dim 1\nv 0\nv x\ns 0 1\n") == 3);
    CHECK(error_line("v 0\n") == 1);
    CHECK(error_line("dim 1\nv 0\nv 1\ns 0 2\n") == 4);
    CHECK(error_line("dim 2\nv 0 0\nv 1 0\nv 2 0\ns 0 1 2\n") == 5);
    CHECK(error_line("dim 1\nv 0\nv 1\ns 0 1\ns 1 0\n") == 5);
    CHECK(error_line("dim 1\nv 0\nv 1\nv 2\ns 0 1\nfoo\n") == 6);
    // three triangles on edge 0-1
    CHECK_THROWS_AS(parse("dim 2\nv 0 0\nv 1 0\nv 0 1\nv 0 -1\nv 1 1\ns 0 1 2\ns 0 1 3\ns 0 1 4\n"), ValidationError);
    // overlapping segments
    CHECK_THROWS_AS(parse("dim 1\nv 0\nv 2\nv 1\nv 3\ns 0 1\ns 2 3\n"), ValidationError);
    // unused vertex
    CHECK_THROWS_AS(parse("dim 1\nv 0\nv 1\nv 5\ns 0 1\n"), ValidationError);
    CHECK_THROWS_AS(load_mesh_file(fixture("does-not-exist.mesh")), ValidationError);
}

TEST_CASE("vertex_star examples") {
    auto line = load_fixture("line10.mesh");
    CHECK(line->vertex_star(5).size() == 2);
    CHECK(line->vertex_star(0).size() == 1);
    CHECK(line->vertex_star(10).size() == 1);
    CHECK_THROWS_AS(line->vertex_star(11), NotFound);
    CHECK_THROWS_AS(line->vertex_star(-1), NotFound);

    for (int k : {3, 5, 7}) {
        std::vector<SpacePoint> v{{0, 0}};
        std::vector<std::vector<VertexId>> s;
        for (int i = 0; i < k; ++i) v.push_back({std::cos(2 * M_PI * i / k), std::sin(2 * M_PI * i / k)});
        for (int i = 0; i < k; ++i) s.push_back({0, 1 + i, 1 + (i + 1) % k});
        auto fan = SpaceMesh::build(2, v, s);
        CHECK(static_cast<int>(fan.vertex_star(0).size()) == k);
        CHECK(fan.max_degree() == k);
    }
}

TEST_CASE("mesh_stats examples") {
    auto line = load_fixture("line10.mesh");
    auto st = mesh_stats(*line);
    CHECK(st.wmin == 1.0);
    CHECK(st.diameter == 10.0);
    CHECK(st.max_degree == 2);

    auto grid = grid_mesh(10, 10, 1.0);
    // brute force over every triangle and every vertex pair
    double wmin = 1e300, diam = 0.0;
    for (SimplexId s = 0; s < grid->simplex_count(); ++s) {
        auto t = grid->simplex(s);
        SpacePoint a = grid->vertex(t[0]), b = grid->vertex(t[1]), c = grid->vertex(t[2]);
        double area = 0.5 * std::abs(cross(b - a, c - a));
        for (double e : {distance(a, b), distance(b, c), distance(c, a)}) wmin = std::min(wmin, 2 * area / e);
    }
    for (int i = 0; i < grid->vertex_count(); ++i)
        for (int j = 0; j < grid->vertex_count(); ++j) diam = std::max(diam, distance(grid->vertex(i), grid->vertex(j)));
    CHECK(grid->wmin() == doctest::Approx(wmin));
    CHECK(grid->wmin() == doctest::Approx(std::sqrt(2.0) / 2.0));
    CHECK(grid->diameter() == doctest::Approx(diam));
    CHECK(grid->diameter() == doctest::Approx(std::sqrt(200.0)));
    auto gs = mesh_stats(*grid);
    CHECK(gs.wmin == grid->wmin());
    CHECK(gs.diameter == grid->diameter());
    CHECK(gs.max_degree == grid->max_degree());

    auto single = line_mesh({0.0, 1.0});
    CHECK(single->wmin() == 1.0);
    CHECK(single->diameter() == 1.0);
    CHECK(single->max_degree() == 1);
}

TEST_CASE("save_mesh then load_mesh is the identity") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        auto mesh = trial % 2 ? random_line(rng, 30) : grid_mesh(5, 4, 0.1 + trial * 0.013, false, &rng, 0.2);
        std::ostringstream a;
        save_mesh(*mesh, a);
        std::istringstream in(a.str());
        auto back = load_mesh(in);
        std::ostringstream b;
        save_mesh(back, b);
        CHECK(a.str() == b.str());
        REQUIRE(back.vertex_count() == mesh->vertex_count());
        for (VertexId v = 0; v < mesh->vertex_count(); ++v) {
            CHECK(back.vertex(v).x == mesh->vertex(v).x);
            CHECK(back.vertex(v).y == mesh->vertex(v).y);
        }
        for (SimplexId s = 0; s < mesh->simplex_count(); ++s) {
            CHECK(back.simplex(s) == mesh->simplex(s));
            CHECK(back.flipped(s) == mesh->flipped(s));
        }
    }
    // decimal inputs survive a round trip bit-exactly
    auto m = parse("dim 1\nv 0.1\nv 0.30000000000000004\nv 1e-7\ns 0 1\ns 2 0\n");
    std::ostringstream out;
    save_mesh(m, out);
    std::istringstream in(out.str());
    auto back = load_mesh(in);
    CHECK(back.vertex(0).x == 0.1);
    CHECK(back.vertex(1).x == 0.30000000000000004);
    CHECK(back.vertex(2).x == 1e-7);
    CHECK(back.oriented(1) == std::vector<VertexId>{2, 0});
}

TEST_CASE("vertex stars are exact on a large grid") {
    auto grid = grid_mesh(70, 70, 1.0, true);
    REQUIRE(grid->simplex_count() == 9800);
    for (VertexId v = 0; v < grid->vertex_count(); ++v) {
        auto star = grid->vertex_star(v);
        CHECK(static_cast<int>(star.size()) <= grid->max_degree());
        std::size_t count = 0;
        for (SimplexId s = 0; s < grid->simplex_count(); ++s) {
            auto vs = grid->simplex_span(s);
            bool has = std::find(vs.begin(), vs.end(), v) != vs.end();
            bool listed = std::binary_search(star.begin(), star.end(), s);
            if (has != listed) FAIL("star mismatch at vertex " << v << " simplex " << s);
            count += has;
        }
        CHECK(count == star.size());
    }
    for (SimplexId s = 0; s < grid->simplex_count(); ++s) CHECK(grid->wmin() <= grid->simplex_width(s));
}
