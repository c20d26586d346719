#include "manet/net/sweep.hpp"

#include <atomic>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace manet {

std::vector<SweepCell> enumerate_cells(const SweepSpec& spec) {
    std::vector<SweepCell> cells;
    for (const double v : spec.values) {
        for (std::size_t si = 0; si < spec.seeds.size(); ++si) {
            for (const Protocol proto : {Protocol::Mcba, Protocol::AodvBaseline}) {
                SweepCell c;
                c.value = v;
                c.seed_index = si;
                c.protocol = proto;
                c.seed = cell_seed(spec.seeds[si], v, si, proto);
                cells.push_back(c);
            }
        }
    }
    return cells;
}

ScenarioConfig cell_config(const SweepSpec& spec, const SweepCell& cell) {
    ScenarioConfig cfg = spec.base;
    cfg.protocol = cell.protocol;
    cfg.master_seed = cell.seed;
    if (spec.parameter == SweepParam::NodeCount) {
        cfg.node_count = static_cast<std::uint32_t>(cell.value);
        cfg.scenario_id = spec.base.scenario_id + "-n" + std::to_string(cfg.node_count);
    } else {
        cfg.pause_s = cell.value;
        cfg.scenario_id = spec.base.scenario_id + "-p" + format_g9(cell.value);
    }
    return cfg;
}

SweepResult run_sweep(const SweepSpec& spec, unsigned jobs) {
    const std::vector<SweepCell> cells = enumerate_cells(spec);
    SweepResult result;
    result.rows.resize(cells.size());
    result.row_values.resize(cells.size());

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size() || failed.load()) {
                return;
            }
            const SweepCell& cell = cells[i];
            try {
                const ScenarioConfig cfg = cell_config(spec, cell);
                const auto issues = cfg.validate();
                if (!issues.empty()) {
                    throw ScenarioError(issues);
                }
                Simulation sim(cfg);
                const RunResult rr = sim.run();
                RunRow row;
                row.scenario_id = cfg.scenario_id;
                row.protocol = protocol_label(cell.protocol);
                row.seed = cell.seed;
                row.nodes = cfg.node_count;
                row.pause_s = cfg.pause_s;
                row.report = rr.report;
                result.rows[i] = std::move(row);
                result.row_values[i] = cell.value;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lk(failure_mutex);
                failed.store(true);
                if (failure.empty()) {
                    failure = "sweep cell " + std::to_string(i) + " (value=" + format_g9(cell.value) +
                              ", seed_index=" + std::to_string(cell.seed_index) + ", protocol=" +
                              protocol_label(cell.protocol) + ") failed: " + e.what();
                }
            }
        }
    };

    const unsigned n_workers = std::max(1u, jobs);
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(n_workers);
        for (unsigned t = 0; t < n_workers; ++t) {
            threads.emplace_back(worker);
        }
        for (auto& t : threads) {
            t.join();
        }
    }
    if (failed.load()) {
        throw std::runtime_error(failure);
    }

    const std::string pname = spec.parameter == SweepParam::NodeCount ? "node_count" : "pause";
    result.aggregates = aggregate_rows(pname, spec.values, {"mcba", "aodv-baseline"}, result.rows, result.row_values);
    return result;
}

} // namespace manet
