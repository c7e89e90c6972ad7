#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tent/front.hpp"
#include "tent/geometry.hpp"
#include "tent/kernels.hpp"
#include "tent/space_mesh.hpp"
#include "tent/wavespeed_field.hpp"

namespace tent {

struct ConstraintConfig {
    int dim = 1;
    double epsilon = 0.5;
    double eta = 0.0;
    double sigma_min = 1.0;
    double wmin = 1.0;
    double tmin = 1.0;
    int interior_samples = 3;  // interior dt samples of the progressive check
    int slope_samples = 0;     // extra barycentric samples for min_slope_over
    double tolerance = 1e-12;  // relative slack tolerance

    /// Tmin = sigma_min * wmin (1D) or epsilon * sigma_min * wmin (2D);
    /// eta defaults to 1e-9 * sigma_min * wmin.
    static ConstraintConfig make(const SpaceMesh& mesh, const SlopeField& field, double epsilon = 0.5,
                                 std::optional<double> eta = std::nullopt);
    void validate() const;
};

enum class Binding { none, causality, progress };
std::string to_string(Binding b);

struct ConstraintVerdict {
    bool satisfied = true;
    double slack = 0.0;  // time units
    Binding binding = Binding::none;
};

/// Folds a raw slack into a verdict: |slack| <= tol * scale counts as 0.
ConstraintVerdict make_verdict(double slack, double scale, Binding binding, double tolerance = 1e-12);

/// Keeps the verdict with the smaller slack (first one on ties).
ConstraintVerdict tighter(const ConstraintVerdict& a, const ConstraintVerdict& b);

/// |tB - tA| / length <= sigma.
ConstraintVerdict causal_segment(double tA, double tB, double length, double sigma, double tolerance = 1e-12);

/// Causality of the triangle with candidate apex p over edge qr, via the
/// projection u of p on qr: |t(p) - t(u)| <= |up| sqrt(sigma^2 - g^2), g the
/// gradient along qr. Equivalent to ||grad t|| <= sigma.
ConstraintVerdict causal_triangle(const EventPoint& p, const EventPoint& q, const EventPoint& r, double sigma,
                                  double tolerance = 1e-12);

/// Three front vertices with their ids (ids break time ties).
struct FrontTriangle {
    std::array<VertexId, 3> ids{};
    std::array<EventPoint, 3> points{};
    SimplexId element = -1;

    FrontTriangle sorted() const;  // ascending (time, id)
    SpacetimeSimplex lifted() const;
};

FrontTriangle front_triangle(const Front& front, SimplexId s);

/// (t(r) - t(q)) / |qr| <= (1 - eps) sigma phi_p for the (time, id) order p, q, r.
ConstraintVerdict progress_ok(const FrontTriangle& tri, double sigma, double epsilon, double tolerance = 1e-12);

/// For dt in {0, Tmin} and the interior samples: P'QR causal under
/// sigma(P'QR), and progress-constrained under sigma(P'Q'R) with
/// Q' = (q, t(q) + Tmin). Returns the tightest verdict.
ConstraintVerdict is_progressive_triangle(const FrontTriangle& tri, const SlopeField& field,
                                          const ConstraintConfig& config);

struct FrontCheck {
    bool ok = true;
    SimplexId facet = -1;  // first failing facet
    ConstraintVerdict verdict;
};

/// Every facet causal under min_slope_over of its lift.
FrontCheck is_causal_front(const Front& front, const SlopeField& field, const ConstraintConfig& config,
                           kernels::Exec exec = kernels::Exec::parallel);
/// 2D: every triangle progressive. 1D: same as is_causal_front.
FrontCheck is_progressive_front(const Front& front, const SlopeField& field, const ConstraintConfig& config,
                                kernels::Exec exec = kernels::Exec::parallel);

/// Verdict for one facet: causal in 1D, progressive in 2D.
ConstraintVerdict facet_verdict(const Front& front, SimplexId s, const SlopeField& field,
                                const ConstraintConfig& config, bool progressive);

/// ((1 - eps) sigma_prog phi_q - c g) / sqrt(1 - c^2), c = n_qr . n_rp: the
/// bound on (t'(p) - t(u)) / |up| keeping the new rp edge within the
/// progress constraint.
double progress_bound_rhs(const TriangleFrame& frame, double edge_gradient, double sigma_prog,
                          const ConstraintConfig& config);

/// Front with the given times, checked for causality.
Front initial_front(std::shared_ptr<const SpaceMesh> mesh, const SlopeField& field, const ConstraintConfig& config,
                    std::vector<double> times = {});

/// Rows `facet <id> <causal|progress|none> <0|1> <slack>`.
void write_diagnostics(const Front& front, const SlopeField& field, const ConstraintConfig& config,
                       std::ostream& out);

}  // namespace tent
