#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tent/cone_hierarchy.hpp"
#include "tent/constraints.hpp"
#include "tent/front.hpp"
#include "tent/spacetime_mesh.hpp"
#include "tent/wavespeed_field.hpp"

namespace tent {

enum class Heuristic { lowest_time, min_slope_neighborhood, round_robin };

std::string to_string(Heuristic h);
/// Accepts "lowest-time", "min-slope-neighborhood", "round-robin".
Heuristic parse_heuristic(const std::string& name);

/// Read-only view of everything a height computation depends on.
struct PitchContext {
    const Front& front;
    const SlopeField& field;
    const ConeHierarchy& hierarchy;
    const ConstraintConfig& config;
    bool use_hierarchy = true;
};

struct HeightResult {
    double height = 0.0;
    double t_local = 0.0;
    double t_remote = kInfinity;  // 1D only
    double sigma_local = 0.0;
    int iterations = 0;         // feasibility probes in the search
    bool floored = false;       // Tmin floor applied
};

/// Minimum leaf slope over the star of p.
double sigma_local(const PitchContext& ctx, VertexId p);

/// Largest t'(p) allowed by the star facets' causality (and, in 2D, the
/// progress bound) under sigma_local; closed form per facet.
double t_local(const PitchContext& ctx, VertexId p);

/// Whether lifting p to time t(p) + height satisfies every constraint the
/// greedy step enforces.
bool height_feasible(const PitchContext& ctx, VertexId p, double height);

/// max(Tmin, min(T_local, T_remote) - t(p) - eta), confirmed against
/// height_feasible and bisected when the closed form fails.
HeightResult greedy_height_1d(const PitchContext& ctx, VertexId p);

/// Bisection on height_feasible over [Tmin, T_local - t(p)].
HeightResult greedy_height_2d(const PitchContext& ctx, VertexId p);

HeightResult greedy_height(const PitchContext& ctx, VertexId p);

/// Iteration cap of the bisection: ceil(log2(range / eta)) + 2, at most 128.
int bisection_cap(double range, double eta);

/// Picks a local minimum with time below `below`, or -1 if none.
class VertexSelector {
public:
    explicit VertexSelector(Heuristic h = Heuristic::lowest_time) : heuristic_(h) {}
    Heuristic heuristic() const noexcept { return heuristic_; }
    VertexId select(const Front& front, std::span<const double> leaf_slopes, double below = kInfinity);

private:
    Heuristic heuristic_;
    VertexId cursor_ = -1;
};

struct PitcherOptions {
    double epsilon = 0.5;
    std::optional<double> eta;
    Heuristic heuristic = Heuristic::lowest_time;
    bool use_hierarchy = true;
    bool assert_invariants = false;
    int slope_samples = 0;
    int interior_samples = 3;
    /// Every slope query sees at most this value (the global-minimum
    /// comparison run sets it to sigma_min).
    std::optional<double> clamp_slope;
};

struct PitcherStats {
    std::int64_t patches = 0;
    std::int64_t elements = 0;
    double height_min = kInfinity;
    double height_max = 0.0;
    double height_sum = 0.0;
    std::int64_t floored = 0;
    std::int64_t probes = 0;
};

/// The advancing-front driver.
class Pitcher {
public:
    Pitcher(std::shared_ptr<const SpaceMesh> mesh, std::shared_ptr<SlopeField> field, PitcherOptions options = {},
            std::vector<double> initial_times = {});

    const SpaceMesh& mesh() const noexcept { return *mesh_; }
    const Front& front() const noexcept { return front_; }
    const SlopeField& field() const noexcept { return *field_; }
    const ConeHierarchy& hierarchy() const noexcept { return hierarchy_; }
    const SpacetimeMesh& spacetime() const noexcept { return spacetime_; }
    const ConstraintConfig& config() const noexcept { return config_; }
    const PitcherOptions& options() const noexcept { return options_; }
    const PitcherStats& stats() const noexcept { return stats_; }
    PitchContext context() const { return {front_, *field_, hierarchy_, config_, options_.use_hierarchy}; }

    VertexId select_vertex(double below = kInfinity) { return selector_.select(front_, hierarchy_.leaf_slopes(), below); }
    HeightResult plan(VertexId p) const { return greedy_height(context(), p); }

    /// Lifts local minimum p by the greedy height, records the patch, runs
    /// the solver stub and refreshes the star leaves. Throws
    /// ContractViolation if p is not a local minimum or (in assertion
    /// mode) the new front breaks causality or progressiveness.
    const Patch& pitch(VertexId p);

    /// Pitches until every vertex time is >= target. `on_patch` runs after
    /// each pitch. Throws ContractViolation past `max_patches` (default:
    /// patch_guard(target)).
    void advance_until(double target, std::function<void(const Patch&)> on_patch = {},
                       std::optional<std::int64_t> max_patches = std::nullopt);

    /// Safe upper bound on pitches to reach target: every pitch adds at
    /// least Tmin to the sum of vertex times.
    std::int64_t patch_guard(double target) const;

private:
    std::shared_ptr<const SpaceMesh> mesh_;
    std::shared_ptr<SlopeField> field_;
    PitcherOptions options_;
    ConstraintConfig config_;
    Front front_;
    ConeHierarchy hierarchy_;
    SpacetimeMesh spacetime_;
    VertexSelector selector_;
    PitcherStats stats_;
};

/// Ceiling on patches from the progress bound: ceil(diam sigma_max T / Tmin).
std::int64_t theorem_patch_bound(const SpaceMesh& mesh, const SlopeField& field, const ConstraintConfig& config,
                                 double target);
/// Ceiling on elements: 2 (1D) or max degree (2D) times the patch bound's
/// real-valued argument, rounded up.
std::int64_t theorem_element_bound(const SpaceMesh& mesh, const SlopeField& field, const ConstraintConfig& config,
                                   double target);

}  // namespace tent
