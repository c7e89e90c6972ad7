#include "tent/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "tent/errors.hpp"
#include "tent/io.hpp"

namespace tent {

namespace {

template <class Fn>
void write_file(const std::string& path, Fn&& fn) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    fn(out);
    if (!out) throw ValidationError("write to '" + path + "' failed");
}

PitcherOptions options_from(const RunConfig& c) {
    PitcherOptions o;
    o.epsilon = c.epsilon;
    o.eta = c.eta;
    o.heuristic = c.heuristic;
    o.use_hierarchy = c.hierarchy;
    o.assert_invariants = c.assert_invariants;
    return o;
}

}  // namespace

std::string snapshot_path(const std::string& out_path, long long patches) {
    std::string base = out_path.empty() ? std::string("front") : out_path;
    return base + ".terrain-" + std::to_string(patches) + ".txt";
}

int run(const RunConfig& config, std::ostream& err) {
    std::shared_ptr<const SpaceMesh> mesh;
    std::shared_ptr<SlopeField> field;
    try {
        if (!(config.target_time >= 0.0)) throw InvalidArgument("--target-time must be >= 0");
        if (config.snapshot_every < 0) throw InvalidArgument("--snapshot-every must be >= 0");
        mesh = std::make_shared<const SpaceMesh>(load_mesh_file(config.mesh_path));
        field = load_field_file(config.field_path, mesh);
    } catch (const ValidationError& e) {
        err << "tentpitch: " << e.what() << '\n';
        return exit_input;
    } catch (const Error& e) {
        err << "tentpitch: " << e.what() << '\n';
        return exit_input;
    }

    auto started = std::chrono::steady_clock::now();
    std::optional<Pitcher> pitcher;
    try {
        pitcher.emplace(mesh, field, options_from(config));
    } catch (const ValidationError& e) {
        err << "tentpitch: " << e.what() << '\n';
        return exit_input;
    } catch (const InvalidArgument& e) {
        err << "tentpitch: " << e.what() << '\n';
        return exit_input;
    }

    try {
        pitcher->advance_until(config.target_time, [&](const Patch& patch) {
            if (config.snapshot_every > 0 && (patch.id + 1) % config.snapshot_every == 0)
                write_file(snapshot_path(config.out_path, patch.id + 1),
                           [&](std::ostream& o) { write_terrain(pitcher->front(), o); });
        });
    } catch (const ContractViolation& e) {
        err << "tentpitch: contract violation: " << e.what() << '\n';
        return exit_contract;
    } catch (const ValidationError& e) {
        err << "tentpitch: " << e.what() << '\n';
        return exit_input;
    } catch (const Error& e) {
        err << "tentpitch: " << e.what() << '\n';
        return exit_contract;
    }
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    std::optional<std::int64_t> global_elements;
    if (config.compare_global_min) {
        try {
            auto fresh = load_field_file(config.field_path, mesh);
            PitcherOptions o = options_from(config);
            o.clamp_slope = fresh->sigma_min();
            Pitcher global(mesh, fresh, o);
            global.advance_until(config.target_time);
            global_elements = global.stats().elements;
        } catch (const Error& e) {
            err << "tentpitch: global-minimum run failed: " << e.what() << '\n';
            return exit_contract;
        }
    }

    try {
        const auto& st = pitcher->stats();
        const auto& cfg = pitcher->config();
        if (!config.out_path.empty())
            write_file(config.out_path, [&](std::ostream& o) { write_spacetime_mesh(pitcher->spacetime(), o); });
        if (!config.vtk_path.empty())
            write_file(config.vtk_path, [&](std::ostream& o) { write_vtk(pitcher->spacetime(), o); });
        if (!config.terrain_path.empty())
            write_file(config.terrain_path, [&](std::ostream& o) { write_terrain(pitcher->front(), o); });
        if (!config.diagnostics_path.empty())
            write_file(config.diagnostics_path,
                       [&](std::ostream& o) { write_diagnostics(pitcher->front(), pitcher->field(), cfg, o); });
        if (!config.stats_path.empty()) {
            KeyValueWriter kv;
            kv.add("dim", static_cast<long long>(mesh->dim()));
            kv.add("vertices", static_cast<long long>(mesh->vertex_count()));
            kv.add("simplices", static_cast<long long>(mesh->simplex_count()));
            kv.add("field", to_string(field->kind()));
            kv.add("sigma_min", field->sigma_min());
            kv.add("sigma_max", field->sigma_max());
            kv.add("wmin", mesh->wmin());
            kv.add("diameter", mesh->diameter());
            kv.add("max_degree", static_cast<long long>(mesh->max_degree()));
            kv.add("epsilon", cfg.epsilon);
            kv.add("eta", cfg.eta);
            kv.add("tmin", cfg.tmin);
            kv.add("target_time", config.target_time);
            kv.add("heuristic", to_string(config.heuristic));
            kv.add("hierarchy", config.hierarchy ? "on" : "off");
            kv.add("patch_count", static_cast<long long>(st.patches));
            kv.add("element_count", static_cast<long long>(st.elements));
            kv.add("patch_bound",
                   static_cast<long long>(theorem_patch_bound(*mesh, *field, cfg, config.target_time)));
            kv.add("element_bound",
                   static_cast<long long>(theorem_element_bound(*mesh, *field, cfg, config.target_time)));
            kv.add("height_min", st.patches > 0 ? st.height_min : 0.0);
            kv.add("height_mean", st.patches > 0 ? st.height_sum / static_cast<double>(st.patches) : 0.0);
            kv.add("height_max", st.height_max);
            kv.add("floored_heights", static_cast<long long>(st.floored));
            kv.add("search_probes", static_cast<long long>(st.probes));
            const auto& qc = pitcher->hierarchy().counters();
            kv.add("hierarchy_queries", static_cast<long long>(qc.queries));
            kv.add("hierarchy_nodes_visited", static_cast<long long>(qc.nodes_visited));
            kv.add("hierarchy_nodes_per_query",
                   qc.queries > 0 ? static_cast<double>(qc.nodes_visited) / static_cast<double>(qc.queries) : 0.0);
            kv.add("final_min_time", pitcher->front().min_time());
            kv.add("final_max_time", pitcher->front().max_time());
            kv.add("spacetime_volume", pitcher->spacetime().total_volume());
            if (global_elements) {
                kv.add("global_min_element_count", static_cast<long long>(*global_elements));
                kv.add("element_ratio", *global_elements > 0
                                            ? static_cast<double>(st.elements) / static_cast<double>(*global_elements)
                                            : 1.0);
            }
            if (config.timing) kv.add("wall_time_s", wall);
            write_file(config.stats_path, [&](std::ostream& o) { kv.write(o); });
        }
    } catch (const Error& e) {
        err << "tentpitch: " << e.what() << '\n';
        return exit_input;
    }
    return exit_ok;
}

}  // namespace tent
