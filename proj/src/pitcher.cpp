#include "tent/pitcher.hpp"

#include <algorithm>
#include <cmath>

#include "tent/errors.hpp"
#include "tent/solver_stub.hpp"

namespace tent {

std::string to_string(Heuristic h) {
    switch (h) {
        case Heuristic::lowest_time: return "lowest-time";
        case Heuristic::min_slope_neighborhood: return "min-slope-neighborhood";
        case Heuristic::round_robin: return "round-robin";
    }
    return "lowest-time";
}

Heuristic parse_heuristic(const std::string& name) {
    if (name == "lowest-time") return Heuristic::lowest_time;
    if (name == "min-slope-neighborhood") return Heuristic::min_slope_neighborhood;
    if (name == "round-robin") return Heuristic::round_robin;
    throw InvalidArgument("unknown heuristic '" + name + "'");
}

double sigma_local(const PitchContext& ctx, VertexId p) {
    double s = kInfinity;
    for (SimplexId f : ctx.front.mesh().vertex_star(p)) s = std::min(s, ctx.hierarchy.leaf_slope(f));
    return s;
}

namespace {

// The two star-simplex vertices other than p, ordered by (time, id).
std::pair<VertexId, VertexId> opposite_edge(const Front& front, SimplexId s, VertexId p) {
    VertexId a = -1, b = -1;
    for (VertexId v : front.mesh().simplex_span(s)) {
        if (v == p) continue;
        (a < 0 ? a : b) = v;
    }
    if (front.time(b) < front.time(a) || (front.time(b) == front.time(a) && b < a)) std::swap(a, b);
    return {a, b};
}

VertexId other_end(const SpaceMesh& mesh, SimplexId s, VertexId p) {
    const auto& vs = mesh.simplex(s);
    return vs[0] == p ? vs[1] : vs[0];
}

double remote_time(const PitchContext& ctx, VertexId p) {
    if (ctx.use_hierarchy) return ctx.hierarchy.ray_shoot(ctx.front, p).time;
    return exhaustive_ray_shoot(ctx.front, ctx.hierarchy.leaf_slopes(), p).time;
}

double remote_slope(const PitchContext& ctx, VertexId p, double top) {
    if (ctx.use_hierarchy) return ctx.hierarchy.min_slope_intersecting(ctx.front, p, top).slope;
    return exhaustive_min_slope(ctx.front, ctx.hierarchy.leaf_slopes(), p, top).slope;
}

bool feasible_1d(const PitchContext& ctx, VertexId p, double height, double sigma_l, double t_remote) {
    const auto& mesh = ctx.front.mesh();
    double t = ctx.front.time(p) + height;
    if (!(t < t_remote)) return false;
    EventPoint top{mesh.vertex(p), t};
    for (SimplexId s : mesh.vertex_star(p)) {
        VertexId q = other_end(mesh, s, p);
        SpacetimeSimplex facet;
        facet.push(top);
        facet.push(ctx.front.event(q));
        double sigma = std::min(sigma_l, min_slope_over(ctx.field, facet, ctx.config.slope_samples, s).value);
        if (!causal_segment(t, ctx.front.time(q), mesh.simplex_measure(s), sigma, ctx.config.tolerance).satisfied)
            return false;
    }
    return true;
}

bool feasible_2d(const PitchContext& ctx, VertexId p, double height, double sigma_l) {
    const auto& mesh = ctx.front.mesh();
    double t = ctx.front.time(p) + height;
    double sigma_r = remote_slope(ctx, p, t);
    for (SimplexId s : mesh.vertex_star(p)) {
        FrontTriangle tri = front_triangle(ctx.front, s);
        for (int i = 0; i < 3; ++i)
            if (tri.ids[i] == p) tri.points[i].time = t;
        double sigma_f = min_slope_over(ctx.field, tri.lifted(), ctx.config.slope_samples, s).value;
        double sigma = std::min({sigma_l, sigma_r, sigma_f});
        int k = tri.ids[0] == p ? 0 : (tri.ids[1] == p ? 1 : 2);
        const EventPoint& a = tri.points[k];
        const EventPoint& b = tri.points[(k + 1) % 3];
        const EventPoint& c = tri.points[(k + 2) % 3];
        if (!causal_triangle(a, b, c, sigma, ctx.config.tolerance).satisfied) return false;
        if (!is_progressive_triangle(tri, ctx.field, ctx.config).satisfied) return false;
    }
    return true;
}

double bisect(double lo, double hi, double eta, int& probes, const std::function<bool(double)>& ok) {
    int cap = bisection_cap(hi - lo, eta);
    for (int i = 0; i < cap && hi - lo > eta; ++i) {
        double mid = lo + 0.5 * (hi - lo);
        ++probes;
        (ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace

int bisection_cap(double range, double eta) {
    if (!(range > eta)) return 0;
    double steps = std::ceil(std::log2(range / eta)) + 2.0;
    return static_cast<int>(std::min(steps, 128.0));
}

double t_local(const PitchContext& ctx, VertexId p) {
    const auto& front = ctx.front;
    const auto& mesh = front.mesh();
    double sigma = sigma_local(ctx, p);
    double best = kInfinity;
    for (SimplexId s : mesh.vertex_star(p)) {
        if (mesh.dim() == 1) {
            VertexId q = other_end(mesh, s, p);
            best = std::min(best, front.time(q) + sigma * mesh.simplex_measure(s));
            continue;
        }
        auto [q, r] = opposite_edge(front, s, p);
        TriangleFrame f = frame(mesh.vertex(p), mesh.vertex(q), mesh.vertex(r));
        double g = (front.time(r) - front.time(q)) / f.qr;
        if (g > sigma) {
            best = std::min(best, front.time(p));
            continue;
        }
        double tu = front.time(q) + g * f.u_offset;
        double causal = tu + f.up * std::sqrt(sigma * sigma - g * g);
        double progress = std::max(tu + f.up * progress_bound_rhs(f, g, sigma, ctx.config), front.time(q));
        best = std::min({best, causal, progress});
    }
    return best;
}

bool height_feasible(const PitchContext& ctx, VertexId p, double height) {
    double sigma_l = sigma_local(ctx, p);
    if (ctx.front.mesh().dim() == 1) return feasible_1d(ctx, p, height, sigma_l, remote_time(ctx, p));
    return feasible_2d(ctx, p, height, sigma_l);
}

HeightResult greedy_height_1d(const PitchContext& ctx, VertexId p) {
    const auto& cfg = ctx.config;
    HeightResult r;
    r.sigma_local = sigma_local(ctx, p);
    r.t_local = t_local(ctx, p);
    r.t_remote = remote_time(ctx, p);
    double t0 = ctx.front.time(p);
    double sup = std::min(r.t_local, r.t_remote);
    double h = std::max(cfg.tmin, sup - t0 - cfg.eta);
    auto ok = [&](double x) { return feasible_1d(ctx, p, x, r.sigma_local, r.t_remote); };
    if (h > cfg.tmin) {
        ++r.iterations;
        if (!ok(h)) h = bisect(cfg.tmin, h, cfg.eta, r.iterations, ok);
    }
    r.height = h;
    r.floored = h == cfg.tmin;
    return r;
}

HeightResult greedy_height_2d(const PitchContext& ctx, VertexId p) {
    const auto& cfg = ctx.config;
    HeightResult r;
    r.sigma_local = sigma_local(ctx, p);
    r.t_local = t_local(ctx, p);
    double lo = cfg.tmin;
    double hi = r.t_local - ctx.front.time(p);
    auto ok = [&](double x) { return feasible_2d(ctx, p, x, r.sigma_local); };
    double h = lo;
    if (hi > lo) {
        ++r.iterations;
        h = ok(hi) ? hi : bisect(lo, hi, cfg.eta, r.iterations, ok);
    }
    r.height = h;
    r.floored = h == cfg.tmin;
    return r;
}

HeightResult greedy_height(const PitchContext& ctx, VertexId p) {
    return ctx.front.mesh().dim() == 1 ? greedy_height_1d(ctx, p) : greedy_height_2d(ctx, p);
}

VertexId VertexSelector::select(const Front& front, std::span<const double> leaf_slopes, double below) {
    const auto& queue = front.minima_queue();
    switch (heuristic_) {
        case Heuristic::lowest_time: {
            auto it = queue.begin();
            return it != queue.end() && it->first < below ? it->second : -1;
        }
        case Heuristic::min_slope_neighborhood: {
            VertexId best = -1;
            double best_slope = kInfinity;
            for (auto [t, v] : queue) {
                if (!(t < below)) break;
                double s = kInfinity;
                for (SimplexId f : front.mesh().vertex_star(v)) s = std::min(s, leaf_slopes[f]);
                if (best < 0 || s < best_slope) best = v, best_slope = s;
            }
            return best;
        }
        case Heuristic::round_robin: {
            VertexId first = -1, next = -1;
            for (auto [t, v] : queue) {
                if (!(t < below)) break;
                if (first < 0 || v < first) first = v;
                if (v > cursor_ && (next < 0 || v < next)) next = v;
            }
            VertexId pick = next >= 0 ? next : first;
            if (pick >= 0) cursor_ = pick;
            return pick;
        }
    }
    return -1;
}

namespace {

std::shared_ptr<SlopeField> maybe_clamp(std::shared_ptr<SlopeField> field, const PitcherOptions& options) {
    if (!options.clamp_slope) return field;
    return std::make_shared<ClampedField>(std::move(field), *options.clamp_slope);
}

ConstraintConfig make_config(const SpaceMesh& mesh, const SlopeField& field, const PitcherOptions& options) {
    ConstraintConfig c = ConstraintConfig::make(mesh, field, options.epsilon, options.eta);
    c.slope_samples = options.slope_samples;
    c.interior_samples = options.interior_samples;
    c.validate();
    return c;
}

}  // namespace

Pitcher::Pitcher(std::shared_ptr<const SpaceMesh> mesh, std::shared_ptr<SlopeField> field, PitcherOptions options,
                 std::vector<double> initial_times)
    : mesh_(std::move(mesh)),
      field_(maybe_clamp(std::move(field), options)),
      options_(options),
      config_(make_config(*mesh_, *field_, options_)),
      front_(initial_front(mesh_, *field_, config_, std::move(initial_times))),
      hierarchy_(ConeHierarchy::build(front_, *field_, config_.slope_samples)),
      spacetime_(*mesh_, front_.times()),
      selector_(options.heuristic) {
    if (mesh_->dim() == 2) {
        FrontCheck check = is_progressive_front(front_, *field_, config_, kernels::Exec::serial);
        if (!check.ok) throw ValidationError("initial front is not progressive on facet " + std::to_string(check.facet));
    }
}

const Patch& Pitcher::pitch(VertexId p) {
    if (p < 0 || p >= mesh_->vertex_count() || !front_.is_local_minimum(p))
        throw ContractViolation("pitch requires a local minimum, got vertex " + std::to_string(p));
    HeightResult plan_result = plan(p);
    double height = plan_result.height;
    if (!(height >= config_.tmin)) throw ContractViolation("tentpole height below Tmin");
    double t_from = front_.time(p);
    front_.advance(p, height);
    const Patch& patch = spacetime_.add_patch(*mesh_, p, t_from, height);
    SolveResult solved = solve_patch(patch, spacetime_, patch.inflow_elements, *field_, config_.slope_samples);
    for (std::size_t i = 0; i < patch.star.size(); ++i)
        hierarchy_.refresh_leaf(patch.star[i], solved.outflow_slopes[i], front_);

    ++stats_.patches;
    stats_.elements += static_cast<std::int64_t>(patch.elements.size());
    stats_.height_min = std::min(stats_.height_min, height);
    stats_.height_max = std::max(stats_.height_max, height);
    stats_.height_sum += height;
    stats_.floored += plan_result.floored ? 1 : 0;
    stats_.probes += plan_result.iterations;

    if (options_.assert_invariants) {
        for (SimplexId s : patch.star) {
            ConstraintVerdict v = facet_verdict(front_, s, *field_, config_, false);
            if (v.satisfied && mesh_->dim() == 2) v = facet_verdict(front_, s, *field_, config_, true);
            if (!v.satisfied)
                throw ContractViolation("facet " + std::to_string(s) + " violates " + to_string(v.binding) +
                                        " after pitching vertex " + std::to_string(p) + " (slack " +
                                        format_real(v.slack) + ")");
        }
    }
    return patch;
}

std::int64_t Pitcher::patch_guard(double target) const {
    double reach = target + field_->sigma_max() * mesh_->diameter();
    double per_vertex = std::ceil(reach / config_.tmin) + 1.0;
    return 2 * static_cast<std::int64_t>(mesh_->vertex_count()) * static_cast<std::int64_t>(per_vertex) + 16;
}

void Pitcher::advance_until(double target, std::function<void(const Patch&)> on_patch,
                            std::optional<std::int64_t> max_patches) {
    if (!(target >= 0.0)) throw InvalidArgument("target time must be >= 0");
    std::int64_t guard = max_patches ? *max_patches : patch_guard(target);
    std::int64_t done = 0;
    while (front_.min_time() < target) {
        if (done >= guard) throw ContractViolation("pitch limit reached before the target time");
        VertexId p = select_vertex(target);
        const Patch& patch = pitch(p);
        ++done;
        if (on_patch) on_patch(patch);
    }
}

std::int64_t theorem_patch_bound(const SpaceMesh& mesh, const SlopeField& field, const ConstraintConfig& config,
                                 double target) {
    return static_cast<std::int64_t>(std::ceil(mesh.diameter() * field.sigma_max() * target / config.tmin));
}

std::int64_t theorem_element_bound(const SpaceMesh& mesh, const SlopeField& field, const ConstraintConfig& config,
                                   double target) {
    double per_patch = mesh.dim() == 1 ? 2.0 : static_cast<double>(mesh.max_degree());
    return static_cast<std::int64_t>(std::ceil(per_patch * mesh.diameter() * field.sigma_max() * target / config.tmin));
}

}  // namespace tent
