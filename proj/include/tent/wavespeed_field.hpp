#pragma once

// Slope oracle sigma(P) = 1 / wavespeed(P) over spacetime. Stands in for the
// PDE solution: the meshing loop only ever asks for slopes.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tent/geometry.hpp"
#include "tent/space_mesh.hpp"

namespace tent {

enum class FieldKind { constant, timestep, cone, band, table, composite };

std::string to_string(FieldKind kind);

/// Vertices of a spacetime simplex: 2 (segment) or 3 (triangle) event points.
struct SpacetimeSimplex {
    std::array<EventPoint, 4> points{};
    int count = 0;

    std::span<const EventPoint> vertices() const { return {points.data(), static_cast<std::size_t>(count)}; }
    void push(EventPoint p) { points[count++] = p; }
};

class SlopeField {
public:
    virtual ~SlopeField() = default;

    virtual FieldKind kind() const = 0;

    /// sigma at P. `element` names the space simplex P belongs to when the
    /// caller knows it; per-element fields use it instead of point location.
    /// Throws OutOfDomain outside M x [0, inf).
    double slope_at(const EventPoint& p, SimplexId element = -1) const;

    /// Points of `simplex` where the field changes value or attains its
    /// minimum, beyond the generic sample set. Built-in piecewise fields use
    /// these to make sampled minima exact.
    virtual void critical_points(const SpacetimeSimplex& simplex, std::vector<EventPoint>& out) const;

    double sigma_min() const noexcept { return sigma_min_; }
    double sigma_max() const noexcept { return sigma_max_; }

    /// Multiplier in (0, 1] applied to sampled minima.
    double conservatism() const noexcept { return kappa_; }
    void set_conservatism(double kappa);

    /// Restricts the spatial domain to a box; slope_at throws outside it.
    void set_domain(SpacePoint lo, SpacePoint hi);

protected:
    virtual double evaluate(const EventPoint& p, SimplexId element) const = 0;
    void set_bounds(double lo, double hi);

private:
    double sigma_min_ = 1.0;
    double sigma_max_ = 1.0;
    double kappa_ = 1.0;
    std::optional<std::pair<SpacePoint, SpacePoint>> domain_;
};

class ConstantField final : public SlopeField {
public:
    explicit ConstantField(double sigma);
    FieldKind kind() const override { return FieldKind::constant; }

protected:
    double evaluate(const EventPoint&, SimplexId) const override { return sigma_; }

private:
    double sigma_;
};

/// sigma(t) = values[i] on [breaks[i-1], breaks[i]); breaks ascending,
/// values.size() == breaks.size() + 1.
class TimeStepField final : public SlopeField {
public:
    TimeStepField(std::vector<double> breaks, std::vector<double> values);
    FieldKind kind() const override { return FieldKind::timestep; }
    void critical_points(const SpacetimeSimplex& simplex, std::vector<EventPoint>& out) const override;

protected:
    double evaluate(const EventPoint& p, SimplexId) const override;

private:
    std::vector<double> breaks_;
    std::vector<double> values_;
};

/// Low slope inside the upward cone t - t_apex >= cone_slope * |x - center|.
class ConeField final : public SlopeField {
public:
    ConeField(SpacePoint center, double t_apex, double sigma_inside, double sigma_outside, double cone_slope);
    FieldKind kind() const override { return FieldKind::cone; }
    void critical_points(const SpacetimeSimplex& simplex, std::vector<EventPoint>& out) const override;
    bool inside(const EventPoint& p) const;

protected:
    double evaluate(const EventPoint& p, SimplexId) const override;

private:
    SpacePoint center_;
    double t_apex_, sigma_in_, sigma_out_, cone_slope_;
};

/// Diagonal band |t - (a x + b)| <= halfwidth carries sigma_band, the rest
/// sigma_outside; from t_after on (if set) sigma_after holds everywhere.
class BandField final : public SlopeField {
public:
    BandField(double a, double b, double halfwidth, double sigma_band, double sigma_outside,
              std::optional<std::pair<double, double>> after = std::nullopt);
    FieldKind kind() const override { return FieldKind::band; }
    void critical_points(const SpacetimeSimplex& simplex, std::vector<EventPoint>& out) const override;
    bool in_band(const EventPoint& p) const;

protected:
    double evaluate(const EventPoint& p, SimplexId) const override;

private:
    double a_, b_, halfwidth_, sigma_band_, sigma_out_;
    std::optional<std::pair<double, double>> after_;
};

/// One row of a scripted field: from `trigger` on, `element` carries `sigma`.
struct ScriptRow {
    SimplexId element = 0;
    double trigger = 0.0;
    double sigma = 0.0;
};

/// Per-space-element slopes with scripted changes over time. The solver stub
/// records which scripted rows it has reached in `current`.
class TableField final : public SlopeField {
public:
    TableField(std::shared_ptr<const SpaceMesh> mesh, std::vector<double> base, std::vector<ScriptRow> script = {});
    FieldKind kind() const override { return FieldKind::table; }
    void critical_points(const SpacetimeSimplex& simplex, std::vector<EventPoint>& out) const override;

    double element_slope(SimplexId element, double time) const;
    std::span<const ScriptRow> script() const noexcept { return script_; }

    /// Latest slope the solver has reported per element.
    double current(SimplexId element) const { return current_.at(element); }
    /// Advances the element's reported slope to its value at `time`. Called
    /// only by the solver stub, between pitches. Returns true if it changed.
    bool record_solved(SimplexId element, double time);

protected:
    double evaluate(const EventPoint& p, SimplexId element) const override;

private:
    std::shared_ptr<const SpaceMesh> mesh_;
    std::vector<double> base_;
    std::vector<ScriptRow> script_;  // sorted by (element, trigger)
    std::vector<double> current_;
};

/// Pointwise minimum of several fields.
class CompositeField final : public SlopeField {
public:
    explicit CompositeField(std::vector<std::shared_ptr<SlopeField>> parts);
    FieldKind kind() const override { return FieldKind::composite; }
    void critical_points(const SpacetimeSimplex& simplex, std::vector<EventPoint>& out) const override;
    std::span<const std::shared_ptr<SlopeField>> parts() const noexcept { return parts_; }

protected:
    double evaluate(const EventPoint& p, SimplexId element) const override;

private:
    std::vector<std::shared_ptr<SlopeField>> parts_;
};

/// A field that reports min(inner, cap) everywhere.
class ClampedField final : public SlopeField {
public:
    ClampedField(std::shared_ptr<SlopeField> inner, double cap);
    FieldKind kind() const override { return inner_->kind(); }
    void critical_points(const SpacetimeSimplex& simplex, std::vector<EventPoint>& out) const override {
        inner_->critical_points(simplex, out);
    }
    SlopeField& inner() noexcept { return *inner_; }

protected:
    double evaluate(const EventPoint& p, SimplexId element) const override;

private:
    std::shared_ptr<SlopeField> inner_;
    double cap_;
};

struct SimplexSlope {
    SpacetimeSimplex simplex;
    double value = 0.0;
};

/// Conservative sigma over a spacetime simplex: the minimum over vertices,
/// edge midpoints, centroid, `samples` extra barycentric points and the
/// field's critical points, times the field's conservatism, clamped to
/// [sigma_min, sigma_max].
SimplexSlope min_slope_over(const SlopeField& field, const SpacetimeSimplex& simplex, int samples = 0,
                            SimplexId element = -1);

/// The sample set min_slope_over evaluates (exposed for tests).
std::vector<EventPoint> slope_sample_points(const SlopeField& field, const SpacetimeSimplex& simplex, int samples);

struct MonotonicityReport {
    int probes = 0;
    int violations = 0;
    std::optional<std::pair<EventPoint, EventPoint>> first;  // (source Q, target P)
};

/// Samples pairs (Q, P) with P inside Q's cone of influence and counts
/// sigma(P) < sigma(Q). Advisory; never throws for violations.
MonotonicityReport check_cone_monotonicity(const SlopeField& field, int probes, SpacePoint lo, SpacePoint hi,
                                           double horizon, std::uint64_t seed = 1);

// Field document: one or more `field ...` lines (combined by pointwise
// minimum) and an optional `kappa <value>` line. Relative table paths are
// resolved against `base_dir`.
std::shared_ptr<SlopeField> load_field(std::istream& in, std::shared_ptr<const SpaceMesh> mesh,
                                       const std::string& base_dir = ".");
std::shared_ptr<SlopeField> load_field_file(const std::string& path, std::shared_ptr<const SpaceMesh> mesh);

std::vector<ScriptRow> load_script(std::istream& in);

}  // namespace tent
