#include "manet/metrics/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

namespace manet {

std::string format_g9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

namespace {

const char* kRunHeader = "scenario_id,protocol,seed,nodes,pause,sent,delivered,dropped,control_pkts,pdr,"
                         "avg_delay_s,throughput_pkts,avg_energy_j,control_overhead,throughput_bps,in_flight,"
                         "flows_admitted,flows_rejected,flags";

void write_row(std::ostream& out, const RunRow& r) {
    const MetricsReport& m = r.report;
    out << r.scenario_id << ',' << r.protocol << ',' << r.seed << ',' << r.nodes << ',' << format_g9(r.pause_s) << ','
        << m.sent << ',' << m.delivered << ',' << m.dropped << ',' << m.control_packets << ','
        << format_g9(m.pdr) << ',' << format_g9(m.avg_delay_s) << ',' << m.throughput_pkts << ','
        << format_g9(m.avg_energy_j) << ',' << (m.overhead_defined ? format_g9(m.control_overhead) : std::string())
        << ',' << format_g9(m.throughput_bps) << ',' << m.in_flight << ',' << m.flows_admitted << ','
        << m.flows_rejected << ',' << m.flags() << '\n';
}

} // namespace

void write_runs_csv(std::ostream& out, const std::vector<RunRow>& rows) {
    out << kRunHeader << '\n';
    for (const auto& r : rows) {
        write_row(out, r);
    }
}

double median(std::vector<double> values) {
    if (values.empty()) {
        return 0.0;
    }
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) {
        return values[n / 2];
    }
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<AggregateRow> aggregate_rows(const std::string& parameter, const std::vector<double>& values,
                                         const std::vector<std::string>& protocols, const std::vector<RunRow>& rows,
                                         const std::vector<double>& row_values) {
    std::vector<AggregateRow> out;
    for (const double v : values) {
        for (const auto& proto : protocols) {
            std::vector<double> pdr, delay, thr, drops, energy, overhead, sent, delivered;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (row_values[i] != v || rows[i].protocol != proto) {
                    continue;
                }
                const MetricsReport& m = rows[i].report;
                pdr.push_back(m.pdr);
                delay.push_back(m.avg_delay_s);
                thr.push_back(static_cast<double>(m.throughput_pkts));
                drops.push_back(static_cast<double>(m.dropped));
                energy.push_back(m.avg_energy_j);
                overhead.push_back(m.control_overhead);
                sent.push_back(static_cast<double>(m.sent));
                delivered.push_back(static_cast<double>(m.delivered));
            }
            if (pdr.empty()) {
                continue;
            }
            AggregateRow ar;
            ar.parameter = parameter;
            ar.value = v;
            ar.protocol = proto;
            ar.runs = pdr.size();
            ar.median.pdr = median(pdr);
            ar.median.avg_delay_s = median(delay);
            ar.median.throughput_pkts = static_cast<std::uint64_t>(median(thr));
            ar.median.dropped = static_cast<std::uint64_t>(median(drops));
            ar.median.avg_energy_j = median(energy);
            ar.median.control_overhead = median(overhead);
            ar.median.sent = static_cast<std::uint64_t>(median(sent));
            ar.median.delivered = static_cast<std::uint64_t>(median(delivered));
            out.push_back(std::move(ar));
        }
    }
    return out;
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
    out << "parameter,value,protocol,runs,median_pdr,median_avg_delay_s,median_throughput_pkts,median_drops,"
           "median_avg_energy_j,median_control_overhead,median_sent,median_delivered\n";
    for (const auto& r : rows) {
        out << r.parameter << ',' << format_g9(r.value) << ',' << r.protocol << ',' << r.runs << ','
            << format_g9(r.median.pdr) << ',' << format_g9(r.median.avg_delay_s) << ',' << r.median.throughput_pkts
            << ',' << r.median.dropped << ',' << format_g9(r.median.avg_energy_j) << ','
            << format_g9(r.median.control_overhead) << ',' << r.median.sent << ',' << r.median.delivered << '\n';
    }
}

void write_timeseries_csv(std::ostream& out, const TimeSeries& series, std::size_t label_idx) {
    out << "t_s,value\n";
    for (std::size_t i = 0; i < series.t_s.size(); ++i) {
        out << format_g9(series.t_s[i]) << ',' << format_g9(series.values[label_idx][i]) << '\n';
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

} // namespace manet
