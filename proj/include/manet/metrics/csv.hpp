#pragma once

#include "manet/metrics/collector.hpp"
#include "manet/metrics/report.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace manet {

struct RunRow {
    std::string scenario_id;
    std::string protocol;
    std::uint64_t seed = 0;
    std::uint32_t nodes = 0;
    double pause_s = 0.0;
    MetricsReport report;
};

// Fixed 9-significant-digit rendering for byte-stable golden files.
std::string format_g9(double v);

// One header row plus one row per run. Ratio columns that are undefined for
// the run are emitted as empty cells; the flags column names them.
void write_runs_csv(std::ostream& out, const std::vector<RunRow>& rows);

struct AggregateRow {
    std::string parameter;
    double value = 0.0;
    std::string protocol;
    std::size_t runs = 0;
    MetricsReport median;
};

double median(std::vector<double> values);

// Seed-wise medians per (sweep value, protocol).
std::vector<AggregateRow> aggregate_rows(const std::string& parameter, const std::vector<double>& values,
                                         const std::vector<std::string>& protocols,
                                         const std::vector<RunRow>& rows,
                                         const std::vector<double>& row_values);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);

void write_timeseries_csv(std::ostream& out, const TimeSeries& series, std::size_t label_idx);

// Minimal CSV line splitter (no quoting; the writer never emits commas in
// fields).
std::vector<std::string> split_csv_line(const std::string& line);

} // namespace manet
