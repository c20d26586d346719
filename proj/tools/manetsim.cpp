#include "manet/metrics/csv.hpp"
#include "manet/net/simulation.hpp"
#include "manet/net/sweep.hpp"
#include "manet/scenario/config.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    out << content;
}

void write_timeseries_files(const fs::path& dir, const manet::TimeSeries& series) {
    for (std::size_t i = 0; i < manet::TimeSeries::labels.size(); ++i) {
        std::ostringstream ss;
        manet::write_timeseries_csv(ss, series, i);
        write_file(dir / ("timeseries_" + std::string(manet::TimeSeries::labels[i]) + ".csv"), ss.str());
    }
}

int cmd_validate(const std::string& scenario_path) {
    try {
        const manet::ScenarioConfig cfg = manet::load_scenario_file(scenario_path);
        std::cout << "ok: " << cfg.scenario_id << " (" << cfg.node_count << " nodes, "
                  << manet::format_g9(cfg.sim_time_s) << " s, " << cfg.flows.size() << " flows, protocol "
                  << manet::protocol_label(cfg.protocol) << ")\n";
        return kExitOk;
    } catch (const manet::ScenarioError& e) {
        for (const auto& issue : e.issues) {
            std::cerr << "error: " << issue << '\n';
        }
        return kExitValidation;
    }
}

int cmd_run(const std::string& scenario_path, const std::string& protocol_override, std::int64_t seed_override,
            const std::string& out_dir, bool timeseries) {
    manet::ScenarioConfig cfg;
    try {
        cfg = manet::load_scenario_file(scenario_path);
        if (!protocol_override.empty()) {
            if (protocol_override == "mcba") {
                cfg.protocol = manet::Protocol::Mcba;
            } else if (protocol_override == "aodv-baseline") {
                cfg.protocol = manet::Protocol::AodvBaseline;
            } else {
                std::cerr << "error: --protocol must be 'mcba' or 'aodv-baseline'\n";
                return kExitValidation;
            }
        }
        if (seed_override >= 0) {
            cfg.master_seed = static_cast<std::uint64_t>(seed_override);
        }
    } catch (const manet::ScenarioError& e) {
        for (const auto& issue : e.issues) {
            std::cerr << "error: " << issue << '\n';
        }
        return kExitValidation;
    }

    try {
        fs::create_directories(out_dir);
        manet::RunOptions opts;
        opts.record_timeseries = timeseries;
        manet::Simulation sim(cfg, opts);
        const manet::RunResult rr = sim.run();

        manet::RunRow row;
        row.scenario_id = cfg.scenario_id;
        row.protocol = manet::protocol_label(cfg.protocol);
        row.seed = cfg.master_seed;
        row.nodes = cfg.node_count;
        row.pause_s = cfg.pause_s;
        row.report = rr.report;

        std::ostringstream csv;
        manet::write_runs_csv(csv, {row});
        write_file(fs::path(out_dir) / "metrics.csv", csv.str());

        std::ostringstream manifest;
        manifest << "# resolved configuration\n" << manet::dump_scenario(cfg);
        manifest << "run.trace_hash = " << rr.trace_hash << '\n';
        manifest << "run.events_fired = " << rr.events_fired << '\n';
        manifest << "run.final_clock_s = " << manet::format_g9(rr.final_clock_s) << '\n';
        write_file(fs::path(out_dir) / "manifest.txt", manifest.str());

        if (timeseries) {
            write_timeseries_files(out_dir, rr.series);
        }

        const manet::MetricsReport& m = rr.report;
        std::cout << "scenario " << cfg.scenario_id << " protocol " << row.protocol << " seed " << cfg.master_seed
                  << '\n';
        std::cout << "  sent " << m.sent << "  delivered " << m.delivered << "  dropped " << m.dropped
                  << "  in-flight " << m.in_flight << "  control " << m.control_packets << '\n';
        std::cout << "  pdr " << manet::format_g9(m.pdr) << "  avg-delay " << manet::format_g9(m.avg_delay_s)
                  << " s  avg-energy " << manet::format_g9(m.avg_energy_j) << " J  overhead "
                  << (m.overhead_defined ? manet::format_g9(m.control_overhead) : "n/a") << '\n';
        std::cout << "  trace-hash " << rr.trace_hash << "  events " << rr.events_fired << '\n';
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

int cmd_sweep(const std::string& spec_path, unsigned jobs, const std::string& out_dir) {
    manet::SweepSpec spec;
    try {
        spec = manet::load_sweep_file(spec_path);
    } catch (const manet::ScenarioError& e) {
        for (const auto& issue : e.issues) {
            std::cerr << "error: " << issue << '\n';
        }
        return kExitValidation;
    }
    try {
        fs::create_directories(out_dir);
        const manet::SweepResult result = manet::run_sweep(spec, jobs);

        std::ostringstream runs;
        manet::write_runs_csv(runs, result.rows);
        write_file(fs::path(out_dir) / "runs.csv", runs.str());

        std::ostringstream agg;
        manet::write_aggregate_csv(agg, result.aggregates);
        write_file(fs::path(out_dir) / "aggregate.csv", agg.str());

        std::cout << result.rows.size() << " runs, " << result.aggregates.size() << " aggregate rows -> " << out_dir
                  << '\n';
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic MANET simulator: cross-layer protocol vs plain AODV"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string protocol;
    std::int64_t seed = -1;
    std::string out_dir = "out";
    bool timeseries = false;
    unsigned jobs = 1;

    auto* run = app.add_subcommand("run", "Run one scenario and write metrics CSV");
    run->add_option("scenario", scenario_path, "Scenario file")->required();
    run->add_option("--protocol", protocol, "Protocol override: mcba | aodv-baseline");
    run->add_option("--seed", seed, "Master seed override");
    run->add_option("--out", out_dir, "Output directory");
    run->add_flag("--timeseries", timeseries, "Also write per-metric time series CSVs");

    auto* sweep = app.add_subcommand("sweep", "Run a sweep spec over values x seeds x protocols");
    sweep->add_option("spec", scenario_path, "Sweep spec file")->required();
    sweep->add_option("--jobs", jobs, "Parallel worker threads");
    sweep->add_option("--out", out_dir, "Output directory");

    auto* validate = app.add_subcommand("validate", "Validate a scenario file");
    validate->add_option("scenario", scenario_path, "Scenario file")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        return cmd_run(scenario_path, protocol, seed, out_dir, timeseries);
    }
    if (sweep->parsed()) {
        return cmd_sweep(scenario_path, jobs, out_dir);
    }
    return cmd_validate(scenario_path);
}
