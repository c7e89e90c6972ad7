#pragma once

// Planar and linear primitives shared by the constraint formulas. Points
// always carry two coordinates; 1D meshes keep y == 0.

#include <array>
#include <cmath>

namespace tent {

struct SpacePoint {
    double x = 0.0;
    double y = 0.0;

    friend SpacePoint operator+(SpacePoint a, SpacePoint b) { return {a.x + b.x, a.y + b.y}; }
    friend SpacePoint operator-(SpacePoint a, SpacePoint b) { return {a.x - b.x, a.y - b.y}; }
    friend SpacePoint operator*(double s, SpacePoint a) { return {s * a.x, s * a.y}; }
    friend bool operator==(SpacePoint a, SpacePoint b) = default;
};

struct EventPoint {
    SpacePoint position;
    double time = 0.0;
};

inline double dot(SpacePoint a, SpacePoint b) { return a.x * b.x + a.y * b.y; }
inline double cross(SpacePoint a, SpacePoint b) { return a.x * b.y - a.y * b.x; }
inline double norm(SpacePoint a) { return std::hypot(a.x, a.y); }
inline double distance(SpacePoint a, SpacePoint b) { return norm(a - b); }

/// Relative threshold below which a simplex counts as degenerate.
inline constexpr double kDegenerateRatio = 1e-12;

struct Projection {
    SpacePoint foot;
    double altitude = 0.0;
};

/// Foot of the perpendicular from p onto line qr. Throws DegenerateSimplex
/// when q == r or p lies on the line.
Projection project_onto_line(SpacePoint p, SpacePoint q, SpacePoint r);

/// max{sin(angle prq), sin(angle pqr)}: the larger sine of the two angles not at p.
double phi(SpacePoint p, SpacePoint q, SpacePoint r);

double triangle_area(SpacePoint p, SpacePoint q, SpacePoint r);

/// Minimum altitude of the triangle.
double triangle_width(SpacePoint p, SpacePoint q, SpacePoint r);

/// Width of a 1D simplex is its length.
double segment_width(SpacePoint a, SpacePoint b);

/// Throws DegenerateSimplex unless the triangle's minimum altitude is at
/// least kDegenerateRatio times its diameter.
void require_nondegenerate(SpacePoint p, SpacePoint q, SpacePoint r);

/// Orthonormal frames attached to edges qr and rp of triangle pqr, with the
/// foot u of the altitude from p. Normals point into the triangle.
struct TriangleFrame {
    SpacePoint p, q, r;
    SpacePoint n_qr, v_qr;  // n_qr . (p - q) > 0, v_qr . (r - q) > 0
    SpacePoint n_rp, v_rp;  // n_rp . (q - p) > 0, v_rp . (p - r) > 0
    SpacePoint u;           // foot of the altitude from p on line qr
    double up = 0.0;        // |up|
    double uq = 0.0;        // |uq|
    double ur = 0.0;        // |ur|
    double beta = 0.0;      // |uq| / |up|
    double u_offset = 0.0;  // signed (u - q) . v_qr; negative when angle pqr is obtuse
    double qr = 0.0;        // |qr|
    double rp = 0.0;        // |rp|
    double phi_p = 0.0;     // phi(p, q, r)
    double phi_q = 0.0;     // phi(q, r, p)

    /// cos of the rotation taking n_qr to n_rp.
    double normal_cos() const { return dot(n_qr, n_rp); }
    double normal_sin() const {
        double c = normal_cos();
        return std::sqrt(std::max(0.0, 1.0 - c * c));
    }
};

TriangleFrame frame(SpacePoint p, SpacePoint q, SpacePoint r);

}  // namespace tent
