#include <iostream>

#include <CLI11.hpp>

#include "tent/cli.hpp"
#include "tent/errors.hpp"

int main(int argc, char** argv) {
    tent::RunConfig config;
    std::string heuristic = "lowest-time";
    double eta = 0.0;
    bool no_hierarchy = false;

    CLI::App app{"Advancing-front spacetime mesher"};
    app.add_option("--mesh", config.mesh_path, "space mesh document")->required();
    app.add_option("--field", config.field_path, "slope field document")->required();
    app.add_option("--target-time", config.target_time, "stop once every vertex reaches this time")->required();
    app.add_option("--epsilon", config.epsilon, "progress parameter in (0, 1/2]");
    auto* eta_opt = app.add_option("--eta", eta, "numerical safety margin (default 1e-9 sigma_min wmin)");
    app.add_option("--heuristic", heuristic, "lowest-time | min-slope-neighborhood | round-robin");
    app.add_flag("--no-hierarchy", no_hierarchy, "use exhaustive cone scans");
    app.add_flag("--assert-invariants", config.assert_invariants, "check every new facet");
    app.add_option("--out", config.out_path, "spacetime mesh output");
    app.add_option("--stats", config.stats_path, "run statistics output");
    app.add_option("--snapshot-every", config.snapshot_every, "write a front terrain every N patches");
    app.add_option("--terrain", config.terrain_path, "final front terrain output");
    app.add_option("--vtk", config.vtk_path, "legacy VTK output");
    app.add_option("--diagnostics", config.diagnostics_path, "per-facet verdicts of the final front");
    app.add_flag("--compare-global-min", config.compare_global_min, "rerun with every slope clamped to sigma_min");
    app.add_flag("--timing", config.timing, "record wall time in the stats");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : tent::exit_input;
    }
    try {
        config.heuristic = tent::parse_heuristic(heuristic);
    } catch (const tent::Error& e) {
        std::cerr << "tentpitch: " << e.what() << '\n';
        return tent::exit_input;
    }
    if (*eta_opt) config.eta = eta;
    config.hierarchy = !no_hierarchy;
    return tent::run(config, std::cerr);
}
