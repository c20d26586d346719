#pragma once

#include "manet/metrics/csv.hpp"
#include "manet/net/simulation.hpp"
#include "manet/scenario/config.hpp"

#include <string>
#include <vector>

namespace manet {

struct SweepCell {
    double value = 0.0;
    std::uint64_t seed = 0;
    std::size_t seed_index = 0;
    Protocol protocol = Protocol::Mcba;
};

struct SweepResult {
    std::vector<RunRow> rows;          // one per cell, in cell order
    std::vector<double> row_values;    // swept value per row
    std::vector<AggregateRow> aggregates;
};

std::vector<SweepCell> enumerate_cells(const SweepSpec& spec);

// Applies one cell to the base scenario (swept parameter, protocol, seed).
ScenarioConfig cell_config(const SweepSpec& spec, const SweepCell& cell);

// Runs every cell, optionally across worker threads. Instances share
// nothing; results land in cell order regardless of completion order.
SweepResult run_sweep(const SweepSpec& spec, unsigned jobs);

} // namespace manet
