#include "tent/geometry.hpp"

#include <algorithm>

#include "tent/errors.hpp"

namespace tent {

namespace {

double diameter3(SpacePoint p, SpacePoint q, SpacePoint r) {
    return std::max({distance(p, q), distance(q, r), distance(r, p)});
}

double sine_at(SpacePoint apex, SpacePoint a, SpacePoint b) {
    SpacePoint da = a - apex;
    SpacePoint db = b - apex;
    return std::abs(cross(da, db)) / (norm(da) * norm(db));
}

}  // namespace

Projection project_onto_line(SpacePoint p, SpacePoint q, SpacePoint r) {
    SpacePoint d = r - q;
    double len = norm(d);
    double diam = diameter3(p, q, r);
    if (!(len > kDegenerateRatio * diam) || diam == 0.0)
        throw DegenerateSimplex("project_onto_line: coincident line endpoints");
    double s = dot(p - q, d) / (len * len);
    SpacePoint foot = q + s * d;
    double altitude = std::abs(cross(d, p - q)) / len;
    if (!(altitude >= kDegenerateRatio * diam))
        throw DegenerateSimplex("project_onto_line: point lies on the line");
    return {foot, altitude};
}

double triangle_area(SpacePoint p, SpacePoint q, SpacePoint r) {
    return 0.5 * std::abs(cross(q - p, r - p));
}

void require_nondegenerate(SpacePoint p, SpacePoint q, SpacePoint r) {
    double diam = diameter3(p, q, r);
    double longest = diam;
    // Smallest altitude sits opposite the longest edge.
    double min_alt = longest > 0.0 ? 2.0 * triangle_area(p, q, r) / longest : 0.0;
    if (!(diam > 0.0) || !(min_alt >= kDegenerateRatio * diam))
        throw DegenerateSimplex("degenerate triangle");
}

double phi(SpacePoint p, SpacePoint q, SpacePoint r) {
    require_nondegenerate(p, q, r);
    return std::max(sine_at(r, p, q), sine_at(q, p, r));
}

double triangle_width(SpacePoint p, SpacePoint q, SpacePoint r) {
    require_nondegenerate(p, q, r);
    return 2.0 * triangle_area(p, q, r) / diameter3(p, q, r);
}

double segment_width(SpacePoint a, SpacePoint b) {
    double len = distance(a, b);
    if (!(len > 0.0)) throw DegenerateSimplex("zero-length segment");
    return len;
}

TriangleFrame frame(SpacePoint p, SpacePoint q, SpacePoint r) {
    require_nondegenerate(p, q, r);
    TriangleFrame f;
    f.p = p;
    f.q = q;
    f.r = r;

    f.qr = distance(q, r);
    f.v_qr = (1.0 / f.qr) * (r - q);
    f.n_qr = {-f.v_qr.y, f.v_qr.x};
    if (dot(f.n_qr, p - q) < 0.0) f.n_qr = -1.0 * f.n_qr;

    f.rp = distance(r, p);
    f.v_rp = (1.0 / f.rp) * (p - r);
    f.n_rp = {-f.v_rp.y, f.v_rp.x};
    if (dot(f.n_rp, q - p) < 0.0) f.n_rp = -1.0 * f.n_rp;

    Projection proj = project_onto_line(p, q, r);
    f.u = proj.foot;
    f.up = proj.altitude;
    f.u_offset = dot(f.u - q, f.v_qr);
    f.uq = std::abs(f.u_offset);
    f.ur = std::abs(f.qr - f.u_offset);
    f.beta = f.uq / f.up;
    f.phi_p = std::max(sine_at(r, p, q), sine_at(q, p, r));
    f.phi_q = std::max(sine_at(r, q, p), sine_at(p, q, r));
    return f;
}

}  // namespace tent
