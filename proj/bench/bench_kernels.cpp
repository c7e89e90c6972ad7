// Serial vs OpenMP kernels on front-sized inputs, plus the hierarchy query
// the exhaustive scans stand in for.

#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "tent/cone_hierarchy.hpp"
#include "tent/constraints.hpp"
#include "tent/front.hpp"
#include "tent/kernels.hpp"
#include "tent/space_mesh.hpp"
#include "tent/wavespeed_field.hpp"

using namespace tent;

namespace {

struct Scene {
    std::shared_ptr<const SpaceMesh> mesh;
    std::unique_ptr<Front> front;
    std::vector<double> slopes;
    ConstantField field{1.0};
    ConstraintConfig config;
};

// n x n union-jack grid with a gentle random terrain.
const Scene& scene(int n) {
    static std::vector<std::unique_ptr<Scene>> cache;
    for (auto& s : cache)
        if (s->mesh->simplex_count() == 2 * n * n) return *s;
    auto s = std::make_unique<Scene>();
    std::vector<SpacePoint> v;
    for (int y = 0; y <= n; ++y)
        for (int x = 0; x <= n; ++x) v.push_back({double(x), double(y)});
    std::vector<std::vector<VertexId>> tris;
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            int a = y * (n + 1) + x, b = a + 1, d = a + n + 1, c = d + 1;
            if ((x + y) % 2 == 0) {
                tris.push_back({a, b, c});
                tris.push_back({a, c, d});
            } else {
                tris.push_back({a, b, d});
                tris.push_back({b, c, d});
            }
        }
    s->mesh = std::make_shared<const SpaceMesh>(SpaceMesh::build(2, std::move(v), std::move(tris)));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 0.1);
    std::vector<double> t(s->mesh->vertex_count());
    for (double& x : t) x = u(rng);
    s->front = std::make_unique<Front>(s->mesh, t);
    s->slopes.assign(s->mesh->simplex_count(), 1.0);
    for (double& x : s->slopes) x += 10.0 * u(rng);
    s->config = ConstraintConfig::make(*s->mesh, s->field);
    cache.push_back(std::move(s));
    return *cache.back();
}

kernels::Exec exec_of(const benchmark::State& state) {
    return state.range(1) ? kernels::Exec::parallel : kernels::Exec::serial;
}

void label(benchmark::State& state) {
    state.SetLabel(state.range(1) ? "openmp x" + std::to_string(kernels::thread_count()) : "serial");
    state.SetItemsProcessed(state.iterations() * 2 * state.range(0) * state.range(0));
}

void BM_causal_front(benchmark::State& state) {
    const auto& s = scene(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(is_causal_front(*s.front, s.field, s.config, exec_of(state)).ok);
    label(state);
}

void BM_exhaustive_ray(benchmark::State& state) {
    const auto& s = scene(static_cast<int>(state.range(0)));
    VertexId p = s.mesh->vertex_count() / 2;
    for (auto _ : state) benchmark::DoNotOptimize(exhaustive_ray_shoot(*s.front, s.slopes, p, exec_of(state)).time);
    label(state);
}

void BM_exhaustive_min_slope(benchmark::State& state) {
    const auto& s = scene(static_cast<int>(state.range(0)));
    VertexId p = s.mesh->vertex_count() / 2;
    for (auto _ : state)
        benchmark::DoNotOptimize(exhaustive_min_slope(*s.front, s.slopes, p, 0.6, exec_of(state)).slope);
    label(state);
}

void BM_hierarchy_ray(benchmark::State& state) {
    const auto& s = scene(static_cast<int>(state.range(0)));
    auto h = ConeHierarchy::build(*s.front, s.slopes);
    VertexId p = s.mesh->vertex_count() / 2;
    for (auto _ : state) benchmark::DoNotOptimize(h.ray_shoot(*s.front, p).time);
    state.SetLabel("hierarchy");
}

void BM_min_by_key(benchmark::State& state) {
    std::ptrdiff_t n = 2 * state.range(0) * state.range(0);
    std::vector<double> xs(n);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (double& x : xs) x = std::sqrt(u(rng));
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::min_by_key(n, [&](std::ptrdiff_t i) { return xs[i]; }, exec_of(state)));
    label(state);
}

void sizes(benchmark::internal::Benchmark* b) {
    for (int n : {32, 128, 256})
        for (int par : {0, 1}) b->Args({n, par});
}

}  // namespace

BENCHMARK(BM_causal_front)->Apply(sizes)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_exhaustive_ray)->Apply(sizes)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_exhaustive_min_slope)->Apply(sizes)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_min_by_key)->Apply(sizes)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_hierarchy_ray)->Args({32, 0})->Args({128, 0})->Args({256, 0})->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
