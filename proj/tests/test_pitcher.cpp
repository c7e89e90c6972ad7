#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "support.hpp"
#include "tent/errors.hpp"
#include "tent/pitcher.hpp"

using namespace tent;
using namespace tent::testing;

namespace {

std::shared_ptr<SlopeField> constant(double s) { return std::make_shared<ConstantField>(s); }

// Integral over the domain of t_final - t_initial, piecewise linear.
double swept_volume(const SpaceMesh& mesh, std::span<const double> t0, std::span<const double> t1) {
    double total = 0.0;
    for (SimplexId s = 0; s < mesh.simplex_count(); ++s) {
        double mean = 0.0;
        for (VertexId v : mesh.simplex_span(s)) mean += t1[v] - t0[v];
        total += mesh.simplex_measure(s) * mean / mesh.simplex_size();
    }
    return total;
}

// Largest grid height h in [0, hmax] such that every grid point up to h is
// accepted, scanning with the given step.
double scan_limit(double hmax, double step, const std::function<bool(double)>& ok) {
    double last = -1.0;
    for (double h = 0.0; h <= hmax; h += step) {
        if (!ok(h)) break;
        last = h;
    }
    return last;
}

double gradient_norm(const EventPoint& a, const EventPoint& b, const EventPoint& c) {
    std::array<EventPoint, 3> pts{a, b, c};
    return norm(linear_gradient(pts));
}

std::set<std::vector<double>> element_geometry(const Pitcher& pitcher) {
    std::set<std::vector<double>> out;
    auto verts = pitcher.spacetime().vertices();
    for (const auto& e : pitcher.spacetime().elements()) {
        std::vector<std::array<double, 3>> pts;
        for (int v : e.vertices.span()) pts.push_back({verts[v].position.x, verts[v].position.y, verts[v].time});
        std::sort(pts.begin(), pts.end());
        std::vector<double> flat;
        for (auto& p : pts) flat.insert(flat.end(), p.begin(), p.end());
        out.insert(flat);
    }
    return out;
}

void check_run_invariants(const Pitcher& pitcher, std::span<const double> t0) {
    const auto& st = pitcher.spacetime();
    const auto& mesh = pitcher.mesh();
    double expected = swept_volume(mesh, t0, pitcher.front().times());
    CHECK(st.total_volume() == doctest::Approx(expected).epsilon(1e-9));
    CHECK(st.dependence_acyclic());
    for (const auto& patch : st.patches()) {
        CHECK(patch.height >= pitcher.config().tmin);
        CHECK(patch.elements.size() == patch.star.size());
        CHECK(static_cast<int>(patch.elements.size()) <= std::max(mesh.max_degree(), 2));
        for (std::size_t i = 0; i < patch.star.size(); ++i) {
            std::vector<int> in(patch.inflow[i].span().begin(), patch.inflow[i].span().end());
            std::sort(in.begin(), in.end());
            int src = patch.inflow_patches[i];
            if (src < 0) {
                for (int v : in) CHECK(v < mesh.vertex_count());
                continue;
            }
            CHECK(src < patch.id);
            const auto& prev = st.patch(src);
            bool found = false;
            for (const auto& out : prev.outflow) {
                std::vector<int> o(out.span().begin(), out.span().end());
                std::sort(o.begin(), o.end());
                found = found || o == in;
            }
            CHECK(found);
        }
    }
}

}  // namespace

TEST_CASE("heuristic names") {
    for (auto h : {Heuristic::lowest_time, Heuristic::min_slope_neighborhood, Heuristic::round_robin})
        CHECK(parse_heuristic(to_string(h)) == h);
    CHECK_THROWS_AS(parse_heuristic("fastest"), InvalidArgument);
}

TEST_CASE("t_local examples") {
    auto line = uniform_line(4, 4.0);
    Pitcher a(line, constant(1.0));
    CHECK(t_local(a.context(), 2) == 1.0);

    auto two = line_mesh({0.0, 2.0, 3.0});
    Pitcher b(two, constant(0.5));
    CHECK(t_local(b.context(), 0) == 1.0);

    auto grid = grid_mesh(2, 2, 1.0);
    Pitcher c(grid, constant(1.0));
    const auto& cfg = c.config();
    CHECK(cfg.tmin == doctest::Approx(0.5 * std::sqrt(0.5)));
    for (VertexId p = 0; p < grid->vertex_count(); ++p) {
        double tl = t_local(c.context(), p);
        CHECK(tl >= cfg.tmin);
        // dense scan: the new star triangles stay causal and, with p on top,
        // progress-constrained
        auto ok = [&](double h) {
            for (SimplexId s : grid->vertex_star(p)) {
                auto tri = front_triangle(c.front(), s);
                for (int i = 0; i < 3; ++i)
                    if (tri.ids[i] == p) tri.points[i].time = h;
                if (gradient_norm(tri.points[0], tri.points[1], tri.points[2]) > 1.0 + 1e-12) return false;
                if (!progress_ok(tri, 1.0, cfg.epsilon).satisfied) return false;
            }
            return true;
        };
        double scan = scan_limit(3.0, 1e-5, ok);
        CHECK(tl == doctest::Approx(scan).epsilon(2e-5));
        CHECK(ok(tl));
    }
}

TEST_CASE("bisection cap") {
    CHECK(bisection_cap(1.0, 1e-9) == 32);
    CHECK(bisection_cap(1.0, 2.0) == 0);
    CHECK(bisection_cap(1e300, 1e-300) == 128);
}

TEST_CASE("greedy_height_1d examples") {
    // local cap binds, remote cones far away
    auto line = line_mesh({0.0, 2.0, 3.0, 4.0});
    auto table = std::make_shared<TableField>(line, std::vector<double>{0.5, 1.0, 1.0});
    Pitcher a(line, table);
    auto r = greedy_height_1d(a.context(), 0);
    CHECK(r.t_local == 1.0);
    CHECK(r.t_remote == 2.0);
    CHECK(r.height == doctest::Approx(1.0 - a.config().eta).epsilon(1e-15));
    CHECK(r.height < 1.0);
    CHECK_FALSE(r.floored);

    // remote facet [2,3] with slope 0.2 and local slope 0.2 too
    auto uni = uniform_line(3, 3.0);
    auto t2 = std::make_shared<TableField>(uni, std::vector<double>{0.2, 1.0, 0.2});
    Pitcher b(uni, t2);
    auto rb = greedy_height_1d(b.context(), 0);
    CHECK(rb.t_remote == doctest::Approx(0.4));
    CHECK(rb.t_local == doctest::Approx(0.2));
    CHECK(rb.height == b.config().tmin);
    CHECK(rb.height == doctest::Approx(0.2));
    CHECK(rb.floored);

    // flat uniform line, sigma 1: the floor and the cap coincide
    Pitcher c(uniform_line(10, 10.0), constant(1.0));
    auto rc = greedy_height_1d(c.context(), 5);
    CHECK(rc.height >= 1.0 - c.config().eta);
    CHECK(rc.height > 0.0);
}

TEST_CASE("greedy 1D heights agree with a fine scan") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int compared = 0;
    for (int trial = 0; trial < 30; ++trial) {
        auto line = random_line(rng, 8);
        std::vector<double> base;
        for (int s = 0; s < 8; ++s) base.push_back(0.3 + u(rng));
        auto table = std::make_shared<TableField>(line, base);
        PitcherOptions opt;
        opt.eta = 1e-4 * table->sigma_min() * line->wmin();
        Pitcher pitcher(line, table, opt);
        for (int step = 0; step < 20; ++step) {
            VertexId p = pitcher.select_vertex();
            const auto& front = pitcher.front();
            auto slopes = pitcher.hierarchy().leaf_slopes();
            auto star = line->vertex_star(p);
            double x = line->vertex(p).x;
            double remote = kInfinity;
            for (SimplexId s = 0; s < line->simplex_count(); ++s) {
                if (std::find(star.begin(), star.end(), s) != star.end()) continue;
                for (VertexId v : line->simplex_span(s))
                    remote = std::min(remote, front.time(v) + slopes[s] * std::abs(line->vertex(v).x - x));
            }
            double sl = kInfinity;
            for (SimplexId s : star) sl = std::min(sl, slopes[s]);
            auto ok = [&](double h) {
                double t = front.time(p) + h;
                if (!(t < remote)) return false;
                for (SimplexId s : star)
                    for (VertexId v : line->simplex_span(s))
                        if (v != p && std::abs(t - front.time(v)) > std::min(sl, table->element_slope(s, t)) *
                                                                        line->simplex_measure(s) * (1 + 1e-12))
                            return false;
                return true;
            };
            double step_h = *opt.eta / 4.0;
            double scan = scan_limit(5.0, step_h, ok);
            auto planned = pitcher.plan(p);
            double expected = std::max(pitcher.config().tmin, scan);
            if (std::abs(planned.height - expected) > *opt.eta * (1 + 1e-6) + 1e-12)
                FAIL("trial " << trial << " step " << step << ": greedy " << planned.height << " scan " << scan);
            ++compared;
            pitcher.pitch(p);
        }
    }
    CHECK(compared == 600);
}

TEST_CASE("greedy_height_2d examples") {
    auto grid = grid_mesh(1, 1, 1.0);
    Pitcher flat(grid, constant(1.0));
    for (VertexId p = 0; p < 4; ++p) {
        auto r = greedy_height_2d(flat.context(), p);
        CHECK(r.height == doctest::Approx(r.t_local - flat.front().time(p)).epsilon(1e-12));
        CHECK(r.height >= flat.config().tmin);
    }

    // sigma drops from 1 to 0.5 at t = 0.3
    auto step = std::make_shared<TimeStepField>(std::vector<double>{0.3}, std::vector<double>{1.0, 0.5});
    PitcherOptions opt;
    opt.eta = 1e-6;
    Pitcher dropping(grid, step, opt);
    for (VertexId p = 0; p < 4; ++p) {
        auto r = greedy_height_2d(dropping.context(), p);
        auto rc = greedy_height_2d(flat.context(), p);
        CHECK(r.height < rc.height);
        CHECK(r.height >= dropping.config().tmin);
        // independent check: a time-only field is min over the lifted triangle's time range
        const auto& cfg = dropping.config();
        auto ok = [&](double h) {
            for (SimplexId s : grid->vertex_star(p)) {
                auto tri = front_triangle(dropping.front(), s);
                double top = 0.0;
                for (int i = 0; i < 3; ++i) {
                    if (tri.ids[i] == p) tri.points[i].time = h;
                    top = std::max(top, tri.points[i].time);
                }
                double sigma = top >= 0.3 ? 0.5 : 1.0;
                if (gradient_norm(tri.points[0], tri.points[1], tri.points[2]) > sigma * (1 + 1e-12)) return false;
                if (!is_progressive_triangle(tri, *step, cfg).satisfied) return false;
            }
            return true;
        };
        double scan = scan_limit(2.0, 1e-4, ok);
        CHECK(std::abs(r.height - std::max(cfg.tmin, scan)) <= 1e-4 + 1e-6);
        CHECK(ok(r.height));
    }

    // an eta wider than the interval: the floor is returned
    PitcherOptions wide;
    wide.eta = 10.0;
    Pitcher coarse(grid, step, wide);
    auto rw = greedy_height_2d(coarse.context(), 0);
    CHECK(rw.height == coarse.config().tmin);
    CHECK(rw.floored);
}

TEST_CASE("pitch examples") {
    Pitcher line(uniform_line(10, 10.0), constant(1.0));
    const auto& patch = line.pitch(5);
    CHECK(patch.elements.size() == 2);
    CHECK(patch.height >= 1.0 - line.config().eta);
    CHECK(patch.implicit.size() == 1);
    CHECK(line.front().time(5) == patch.height);
    CHECK_THROWS_AS(line.pitch(5), ContractViolation);
    CHECK_THROWS_AS(line.pitch(99), ContractViolation);

    for (int k : {3, 5, 6, 8}) {
        std::vector<SpacePoint> v{{0, 0}};
        std::vector<std::vector<VertexId>> s;
        for (int i = 0; i < k; ++i) v.push_back({std::cos(2 * M_PI * i / k), std::sin(2 * M_PI * i / k)});
        for (int i = 0; i < k; ++i) s.push_back({0, 1 + i, 1 + (i + 1) % k});
        Pitcher fan(std::make_shared<const SpaceMesh>(SpaceMesh::build(2, v, s)), constant(1.0));
        const auto& pp = fan.pitch(0);
        CHECK(static_cast<int>(pp.elements.size()) == k);
        CHECK(pp.implicit.size() == static_cast<std::size_t>(k));
        for (int e : pp.elements) CHECK(fan.spacetime().elements()[e].vertices.count == 4);
    }
}

TEST_CASE("pitches at distant local minima commute") {
    auto check_pair = [](std::shared_ptr<const SpaceMesh> mesh, VertexId a, VertexId b) {
        Pitcher ab(mesh, constant(1.0)), ba(mesh, constant(1.0));
        ab.pitch(a);
        ab.pitch(b);
        ba.pitch(b);
        ba.pitch(a);
        CHECK(std::equal(ab.front().times().begin(), ab.front().times().end(), ba.front().times().begin()));
        CHECK(element_geometry(ab) == element_geometry(ba));
    };
    check_pair(uniform_line(8, 8.0), 1, 5);
    check_pair(grid_mesh(4, 4, 1.0), 6, 18);
    check_pair(grid_mesh(4, 4, 1.0, true), 0, 24);
}

TEST_CASE("select_vertex examples") {
    auto path = uniform_line(3, 3.0);
    Front f(path, {0, 1, 0, 2});
    std::vector<double> slopes(3, 1.0);
    VertexSelector lowest(Heuristic::lowest_time);
    CHECK(lowest.select(f, slopes) == 0);
    CHECK(lowest.select(f, slopes, 0.0) == -1);

    auto line = uniform_line(6, 6.0);
    Front flat(line);
    VertexSelector fast(Heuristic::min_slope_neighborhood);
    CHECK(fast.select(flat, std::vector<double>{1, 1, 1, 1, 0.3, 1}) == 4);
    CHECK(fast.select(flat, std::vector<double>{1, 1, 1, 1, 1, 1}) == 0);

    Front three(uniform_line(4, 4.0), {0, 1, 0, 1, 0});
    VertexSelector rr(Heuristic::round_robin);
    std::vector<double> s4(4, 1.0);
    std::vector<VertexId> seen;
    for (int i = 0; i < 7; ++i) seen.push_back(rr.select(three, s4));
    CHECK(seen == std::vector<VertexId>{0, 2, 4, 0, 2, 4, 0});
}

TEST_CASE("advance_until examples and bounds") {
    Pitcher none(uniform_line(10, 10.0), constant(1.0));
    none.advance_until(0.0);
    CHECK(none.stats().patches == 0);
    CHECK_THROWS_AS(none.advance_until(-1.0), InvalidArgument);

    Pitcher line(load_fixture("line10.mesh"), constant(1.0));
    line.advance_until(5.0);
    CHECK(line.front().min_time() >= 5.0);
    CHECK(theorem_element_bound(line.mesh(), line.field(), line.config(), 5.0) == 100);
    CHECK(line.stats().elements <= 100);

    for (const char* name : {"grid2x2.mesh", "grid2x2_unionjack.mesh"}) {
        Pitcher grid(load_fixture(name), constant(1.0));
        grid.advance_until(5.0);
        CHECK(grid.front().min_time() >= 5.0);
        CHECK(grid.stats().elements <= theorem_element_bound(grid.mesh(), grid.field(), grid.config(), 5.0));
    }

    Pitcher capped(uniform_line(10, 10.0), constant(1.0));
    CHECK_THROWS_AS(capped.advance_until(5.0, {}, 3), ContractViolation);
    CHECK(capped.stats().patches == 3);
}

TEST_CASE("runs keep every invariant") {
    std::mt19937_64 rng(67);
    struct Case {
        std::shared_ptr<const SpaceMesh> mesh;
        std::shared_ptr<SlopeField> field;
        Heuristic heuristic;
    };
    std::vector<Case> cases;
    for (int i = 0; i < 4; ++i) {
        auto line = random_line(rng, 12);
        cases.push_back({line, constant(0.7), Heuristic::lowest_time});
        cases.push_back({line,
                         std::make_shared<TimeStepField>(std::vector<double>{1.0, 2.0}, std::vector<double>{0.4, 1.0, 2.0}),
                         Heuristic::round_robin});
        cases.push_back({line, std::make_shared<ConeField>(SpacePoint{6.0, 0.0}, 0.5, 0.3, 1.0, 0.3),
                         Heuristic::min_slope_neighborhood});
        cases.push_back({line, std::make_shared<BandField>(0.5, -1.0, 1.0, 0.5, 2.0), Heuristic::lowest_time});
        auto grid = grid_mesh(3, 3, 1.0, false, &rng, 0.2);
        cases.push_back({grid, constant(1.0), Heuristic::lowest_time});
        cases.push_back({grid,
                         std::make_shared<TimeStepField>(std::vector<double>{1.0}, std::vector<double>{0.6, 1.2}),
                         Heuristic::min_slope_neighborhood});
        cases.push_back({grid, table_field(grid, {0.5, 1.0, 0.8, 1.5}), Heuristic::round_robin});
    }
    for (const auto& c : cases) {
        PitcherOptions opt;
        opt.heuristic = c.heuristic;
        opt.assert_invariants = true;
        Pitcher pitcher(c.mesh, c.field, opt);
        std::vector<double> t0(pitcher.front().times().begin(), pitcher.front().times().end());
        pitcher.advance_until(4.0);
        CHECK(pitcher.front().min_time() >= 4.0);
        CHECK(pitcher.stats().height_min >= pitcher.config().tmin);
        check_run_invariants(pitcher, t0);
    }
}

TEST_CASE("hierarchy on and off produce identical runs") {
    for (const char* mesh_name : {"line10.mesh", "grid2x2.mesh", "obtuse_strip.mesh"}) {
        auto mesh = load_fixture(mesh_name);
        PitcherOptions on, off;
        off.use_hierarchy = false;
        Pitcher a(mesh, constant(1.0), on), b(mesh, constant(1.0), off);
        a.advance_until(3.0);
        b.advance_until(3.0);
        CHECK(std::equal(a.front().times().begin(), a.front().times().end(), b.front().times().begin()));
        CHECK(a.stats().patches == b.stats().patches);
    }
}

TEST_CASE("obtuse triangulation keeps making progress") {
    PitcherOptions opt;
    opt.assert_invariants = true;
    Pitcher pitcher(obtuse_strip(6, 5, 0.35), constant(1.0), opt);
    pitcher.advance_until(40.0);
    CHECK(pitcher.stats().patches >= 2000);
    CHECK(pitcher.stats().height_min >= pitcher.config().tmin);
    CHECK(pitcher.front().min_time() >= 40.0);
}

TEST_CASE("adaptivity on banded and cone fields") {
    auto mesh = load_fixture("line10.mesh");
    auto band = std::make_shared<BandField>(0.5, -1.0, 1.0, 0.5, 2.0);
    Pitcher pitcher(mesh, band);
    double in_sum = 0, out_sum = 0;
    int in_n = 0, out_n = 0;
    pitcher.advance_until(5.0, [&](const Patch& p) {
        EventPoint mid{mesh->vertex(p.vertex), p.t_from + 0.5 * p.height};
        if (band->in_band(mid)) in_sum += p.height, ++in_n;
        else out_sum += p.height, ++out_n;
    });
    REQUIRE(in_n > 0);
    REQUIRE(out_n > 0);
    CHECK(in_sum / in_n < out_sum / out_n);

    PitcherOptions global;
    global.clamp_slope = band->sigma_min();
    Pitcher flat(mesh, std::make_shared<BandField>(0.5, -1.0, 1.0, 0.5, 2.0), global);
    flat.advance_until(5.0);
    CHECK(pitcher.stats().elements < flat.stats().elements);

    auto cone = std::make_shared<ConeField>(SpacePoint{5.0, 0.0}, 1.0, 0.25, 1.0, 0.25);
    Pitcher adaptive(mesh, cone);
    adaptive.advance_until(5.0);
    PitcherOptions clamp;
    clamp.clamp_slope = 0.25;
    Pitcher fixed(mesh, std::make_shared<ConeField>(SpacePoint{5.0, 0.0}, 1.0, 0.25, 1.0, 0.25), clamp);
    fixed.advance_until(5.0);
    CHECK(adaptive.stats().elements < fixed.stats().elements);
}

TEST_CASE("initial fronts") {
    auto mesh = uniform_line(2, 2.0);
    CHECK_THROWS_AS(Pitcher(mesh, constant(1.0), {}, {0.0, 1.5, 0.0}), ValidationError);
    Pitcher p(mesh, constant(1.0), {}, {0.0, 0.5, 0.0});
    CHECK(p.front().time(1) == 0.5);
    auto grid = grid_mesh(1, 1, 1.0);
    // causal but not progressive: qr gradient above (1 - eps) sigma phi_p
    CHECK_THROWS_AS(Pitcher(grid, constant(1.0), {}, {0.0, 0.0, 0.0, 0.65}), ValidationError);
}
