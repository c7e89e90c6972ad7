#include "tent/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "tent/errors.hpp"

namespace tent {

ConstraintConfig ConstraintConfig::make(const SpaceMesh& mesh, const SlopeField& field, double epsilon,
                                        std::optional<double> eta) {
    ConstraintConfig c;
    c.dim = mesh.dim();
    c.epsilon = epsilon;
    c.sigma_min = field.sigma_min();
    c.wmin = mesh.wmin();
    double base = c.sigma_min * c.wmin;
    c.tmin = c.dim == 1 ? base : epsilon * base;
    c.eta = eta ? *eta : 1e-9 * base;
    c.validate();
    return c;
}

void ConstraintConfig::validate() const {
    if (!(epsilon > 0.0 && epsilon <= 0.5)) throw InvalidArgument("epsilon must lie in (0, 1/2]");
    if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidArgument("eta must be positive");
    if (!(tmin > 0.0) || !std::isfinite(tmin)) throw InvalidArgument("Tmin must be positive");
    if (interior_samples < 0 || slope_samples < 0) throw InvalidArgument("sample counts must be >= 0");
}

std::string to_string(Binding b) {
    switch (b) {
        case Binding::causality: return "causal";
        case Binding::progress: return "progress";
        case Binding::none: break;
    }
    return "none";
}

ConstraintVerdict make_verdict(double slack, double scale, Binding binding, double tolerance) {
    ConstraintVerdict v;
    v.binding = binding;
    if (slack < 0.0 && slack >= -tolerance * std::max(scale, 1e-300)) slack = 0.0;
    v.slack = slack;
    v.satisfied = slack >= 0.0;
    return v;
}

ConstraintVerdict tighter(const ConstraintVerdict& a, const ConstraintVerdict& b) {
    return b.slack < a.slack ? b : a;
}

ConstraintVerdict causal_segment(double tA, double tB, double length, double sigma, double tolerance) {
    if (!(length > 0.0) || !(sigma > 0.0)) throw InvalidArgument("causal_segment needs positive length and slope");
    double bound = sigma * length;
    double rise = std::abs(tB - tA);
    double scale = std::max({bound, std::abs(tA), std::abs(tB)});
    return make_verdict(bound - rise, scale, Binding::causality, tolerance);
}

ConstraintVerdict causal_triangle(const EventPoint& p, const EventPoint& q, const EventPoint& r, double sigma,
                                  double tolerance) {
    if (!(sigma > 0.0)) throw InvalidArgument("causal_triangle needs a positive slope");
    TriangleFrame f = frame(p.position, q.position, r.position);
    double scale = std::max({std::abs(p.time), std::abs(q.time), std::abs(r.time), sigma * f.qr});
    double g = (r.time - q.time) / f.qr;
    if (std::abs(g) > sigma) return make_verdict((sigma - std::abs(g)) * f.qr, scale, Binding::causality, tolerance);
    double tu = q.time + g * f.u_offset;
    double bound = f.up * std::sqrt(sigma * sigma - g * g);
    return make_verdict(bound - std::abs(p.time - tu), scale, Binding::causality, tolerance);
}

FrontTriangle FrontTriangle::sorted() const {
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (points[a].time != points[b].time) return points[a].time < points[b].time;
        return ids[a] < ids[b];
    });
    FrontTriangle out;
    out.element = element;
    for (int i = 0; i < 3; ++i) {
        out.ids[i] = ids[order[i]];
        out.points[i] = points[order[i]];
    }
    return out;
}

SpacetimeSimplex FrontTriangle::lifted() const {
    SpacetimeSimplex s;
    for (const auto& p : points) s.push(p);
    return s;
}

FrontTriangle front_triangle(const Front& front, SimplexId s) {
    FrontTriangle tri;
    tri.element = s;
    auto vs = front.mesh().simplex_span(s);
    if (vs.size() != 3) throw InvalidArgument("front_triangle needs a 2D mesh");
    for (int i = 0; i < 3; ++i) {
        tri.ids[i] = vs[i];
        tri.points[i] = front.event(vs[i]);
    }
    return tri;
}

ConstraintVerdict progress_ok(const FrontTriangle& tri, double sigma, double epsilon, double tolerance) {
    FrontTriangle o = tri.sorted();
    const auto& p = o.points[0];
    const auto& q = o.points[1];
    const auto& r = o.points[2];
    double qr = distance(q.position, r.position);
    double bound = (1.0 - epsilon) * sigma * phi(p.position, q.position, r.position) * qr;
    double scale = std::max({bound, std::abs(q.time), std::abs(r.time)});
    return make_verdict(bound - (r.time - q.time), scale, Binding::progress, tolerance);
}

ConstraintVerdict is_progressive_triangle(const FrontTriangle& tri, const SlopeField& field,
                                          const ConstraintConfig& config) {
    FrontTriangle o = tri.sorted();
    const int n = config.interior_samples;
    ConstraintVerdict worst{true, std::numeric_limits<double>::infinity(), Binding::none};
    for (int k = 0; k <= n + 1; ++k) {
        double dt = config.tmin * static_cast<double>(k) / static_cast<double>(n + 1);
        FrontTriangle lifted = o;
        lifted.points[0].time += dt;
        double sigma_c = min_slope_over(field, lifted.lifted(), config.slope_samples, o.element).value;
        worst = tighter(worst, causal_triangle(lifted.points[0], lifted.points[1], lifted.points[2], sigma_c,
                                               config.tolerance));
        FrontTriangle prog = lifted;
        prog.points[1].time += config.tmin;
        double sigma_p = min_slope_over(field, prog.lifted(), config.slope_samples, o.element).value;
        worst = tighter(worst, progress_ok(lifted, sigma_p, config.epsilon, config.tolerance));
    }
    return worst;
}

ConstraintVerdict facet_verdict(const Front& front, SimplexId s, const SlopeField& field,
                                const ConstraintConfig& config, bool progressive) {
    const auto& mesh = front.mesh();
    if (mesh.dim() == 1) {
        auto vs = mesh.simplex_span(s);
        double sigma = min_slope_over(field, front.lifted(s), config.slope_samples, s).value;
        return causal_segment(front.time(vs[0]), front.time(vs[1]), mesh.simplex_measure(s), sigma,
                              config.tolerance);
    }
    FrontTriangle tri = front_triangle(front, s);
    if (progressive) return is_progressive_triangle(tri, field, config);
    double sigma = min_slope_over(field, tri.lifted(), config.slope_samples, s).value;
    return causal_triangle(tri.points[0], tri.points[1], tri.points[2], sigma, config.tolerance);
}

namespace {

FrontCheck check_front(const Front& front, const SlopeField& field, const ConstraintConfig& config,
                       kernels::Exec exec, bool progressive) {
    const auto n = static_cast<std::ptrdiff_t>(front.mesh().simplex_count());
    auto bad = kernels::first_failure(
        n, [&](std::ptrdiff_t s) { return facet_verdict(front, static_cast<SimplexId>(s), field, config, progressive).satisfied; },
        exec);
    FrontCheck out;
    if (bad >= 0) {
        out.ok = false;
        out.facet = static_cast<SimplexId>(bad);
        out.verdict = facet_verdict(front, out.facet, field, config, progressive);
    }
    return out;
}

}  // namespace

FrontCheck is_causal_front(const Front& front, const SlopeField& field, const ConstraintConfig& config,
                           kernels::Exec exec) {
    return check_front(front, field, config, exec, false);
}

FrontCheck is_progressive_front(const Front& front, const SlopeField& field, const ConstraintConfig& config,
                                kernels::Exec exec) {
    return check_front(front, field, config, exec, front.mesh().dim() == 2);
}

double progress_bound_rhs(const TriangleFrame& f, double edge_gradient, double sigma_prog,
                          const ConstraintConfig& config) {
    double c = f.normal_cos();
    double s = f.normal_sin();
    if (!(s > 1e-12)) throw DegenerateSimplex("progress bound: parallel edge normals");
    return ((1.0 - config.epsilon) * sigma_prog * f.phi_q - c * edge_gradient) / s;
}

Front initial_front(std::shared_ptr<const SpaceMesh> mesh, const SlopeField& field, const ConstraintConfig& config,
                    std::vector<double> times) {
    Front front(std::move(mesh), std::move(times));
    FrontCheck check = is_causal_front(front, field, config, kernels::Exec::serial);
    if (!check.ok)
        throw ValidationError("initial front is not causal on facet " + std::to_string(check.facet));
    return front;
}

void write_diagnostics(const Front& front, const SlopeField& field, const ConstraintConfig& config,
                       std::ostream& out) {
    for (SimplexId s = 0; s < front.mesh().simplex_count(); ++s) {
        auto v = facet_verdict(front, s, field, config, front.mesh().dim() == 2);
        out << "facet " << s << ' ' << to_string(v.binding) << ' ' << (v.satisfied ? 1 : 0) << ' '
            << format_real(v.slack) << '\n';
    }
}

}  // namespace tent
