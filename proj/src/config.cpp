#include "manet/scenario/config.hpp"

#include "manet/sim/random.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace manet {

RadioParams ScenarioConfig::radio_params() const {
    RadioParams r;
    r.wavelength_m = wavelength_m;
    r.tx_gain = tx_gain;
    r.rx_gain = rx_gain;
    r.max_power_dbm = watts_to_dbm(max_power_w);
    r.min_power_dbm = min_power_dbm;
    r.channel_rate_bps = channel_rate_bps;
    // The receiver threshold is whatever power the configured range delivers
    // at max transmit power, unless pinned explicitly.
    r.rx_threshold_dbm = rx_threshold_dbm ? *rx_threshold_dbm : received_power_dbm(r.max_power_dbm, range_m, r);
    r.carrier_sense_threshold_dbm = cs_threshold_dbm ? *cs_threshold_dbm : r.rx_threshold_dbm - 7.0;
    return r;
}

EnergyParams ScenarioConfig::energy_params() const {
    EnergyParams e;
    e.initial_j = energy_initial_j;
    e.draw_rx_w = energy_rx_w;
    e.draw_idle_w = energy_idle_w;
    e.draw_tx_max_w = energy_tx_w;
    e.max_radiated_w = max_power_w;
    return e;
}

MacTiming ScenarioConfig::mac_timing() const {
    MacTiming t;
    t.t_sifs_s = sifs_us * 1e-6;
    t.t_difs_s = difs_us * 1e-6;
    t.slot_s = slot_us * 1e-6;
    t.cw_min = cw_min;
    t.cw_max = cw_max;
    t.control_rate_bps = control_rate_bps;
    t.rts_bits = rts_bits;
    t.cts_bits = cts_bits;
    t.ack_bits = ack_bits;
    t.retry_limit = retry_limit;
    t.queue_limit = queue_limit;
    t.rts_at_max_power = rts_at_max_power;
    return t;
}

AodvParams ScenarioConfig::aodv_params() const {
    AodvParams a;
    a.active_route_timeout_s = active_route_timeout_s;
    a.net_traversal_time_s = net_traversal_time_s;
    a.rreq_retries = rreq_retries;
    a.rreq_id_lifetime_s = rreq_id_lifetime_s;
    a.buffer_limit = buffer_limit;
    a.ttl_limit = static_cast<int>(ttl_limit);
    return a;
}

CongestionParams ScenarioConfig::congestion_params() const {
    CongestionParams c;
    c.window_s = window_s;
    c.t_rh_s = t_rh_s ? *t_rh_s : 0.4 * window_s;
    c.rt_min_bps = rate_min_bps;
    c.rt_max_bps = rate_max_bps;
    c.hysteresis = hysteresis;
    return c;
}

AdmissionParams ScenarioConfig::admission_params() const {
    AdmissionParams a;
    a.channel_bw_bps = channel_rate_bps;
    a.weight = wt;
    a.min_bw_bps = min_bw_bps ? *min_bw_bps : 0.05 * channel_rate_bps;
    a.max_bw_bps = max_bw_bps ? *max_bw_bps : 0.40 * channel_rate_bps;
    a.subtract_quotient = fbw_subtract_quotient;
    return a;
}

RoutingCrossLayer ScenarioConfig::routing_crosslayer() const {
    RoutingCrossLayer x;
    const Toggles t = toggles();
    x.link_filter = t.link_filter;
    x.power_control = t.power_control;
    x.rss_accept_threshold_dbm = radio_params().rx_threshold_dbm + rss_margin_db;
    x.k = k;
    return x;
}

Toggles ScenarioConfig::toggles() const {
    const bool on = protocol == Protocol::Mcba;
    Toggles t;
    t.link_filter = link_filter.value_or(on);
    t.power_control = power_control.value_or(on);
    t.congestion_control = congestion_control.value_or(on);
    t.admission_control = admission_control.value_or(on);
    return t;
}

std::vector<std::string> ScenarioConfig::validate() const {
    std::vector<std::string> issues;
    auto require = [&issues](bool ok, const std::string& msg) {
        if (!ok) {
            issues.push_back(msg);
        }
    };
    require(sim_time_s > 0, "sim.time_s must be positive");
    require(node_count >= 2, "sim.node_count must be at least 2");
    require(area_x_m > 0 && area_y_m > 0, "sim.area_x_m and sim.area_y_m must be positive");
    require(timeseries_interval_s > 0, "sim.timeseries_interval_s must be positive");
    require(speed_mps >= 0, "mobility.speed_mps must be nonnegative");
    require(pause_s >= 0, "mobility.pause_s must be nonnegative");
    require(wavelength_m > 0, "radio.wavelength_m must be positive");
    require(tx_gain > 0 && rx_gain > 0, "radio gains must be positive");
    require(range_m > 0, "radio.range_m must be positive");
    require(max_power_w > 0, "radio.max_power_w must be positive");
    require(channel_rate_bps > 0, "radio.channel_rate_bps must be positive");
    if (wavelength_m > 0 && range_m > 0 && max_power_w > 0) {
        const RadioParams rp = radio_params();
        require(rp.carrier_sense_threshold_dbm <= rp.rx_threshold_dbm,
                "radio.cs_threshold_dbm must not exceed the (possibly derived) radio.rx_threshold_dbm");
    }
    require(energy_initial_j > 0 && energy_rx_w > 0 && energy_tx_w > 0 && energy_idle_w > 0,
            "energy values must be positive");
    require(energy_tx_w > energy_idle_w, "energy.tx_w must exceed energy.idle_w");
    require(sifs_us > 0, "mac.sifs_us must be positive");
    require(difs_us > sifs_us, "mac.difs_us must exceed mac.sifs_us");
    require(slot_us > 0, "mac.slot_us must be positive");
    require(cw_min <= cw_max, "mac.cw_min must not exceed mac.cw_max");
    require(control_rate_bps > 0, "mac.control_rate_bps must be positive");
    require(rts_bits > 0 && cts_bits > 0 && ack_bits > 0, "mac frame sizes must be positive");
    require(retry_limit >= 1, "mac.retry_limit must be at least 1");
    require(queue_limit >= 1, "mac.queue_limit must be at least 1");
    require(active_route_timeout_s > 0 && net_traversal_time_s > 0 && rreq_id_lifetime_s > 0,
            "aodv timings must be positive");
    require(hello_interval_s > 0, "aodv.hello_interval_s must be positive");
    require(buffer_limit >= 1, "aodv.buffer_limit must be at least 1");
    require(ttl_limit >= 2, "aodv.ttl_limit must be at least 2");
    require(k >= 1.0, "crosslayer.k must be at least 1");
    require(window_s > 0, "crosslayer.window_s must be positive");
    if (t_rh_s) {
        require(*t_rh_s > 0, "crosslayer.t_rh_s must be positive");
    }
    require(wt > 0, "crosslayer.wt must be positive");
    require(hysteresis >= 0, "crosslayer.hysteresis must be nonnegative");
    require(rate_min_bps > 0 && rate_min_bps <= rate_max_bps,
            "crosslayer rate bounds must satisfy 0 < rate_min_bps <= rate_max_bps");
    if (min_bw_bps && max_bw_bps) {
        require(*min_bw_bps <= *max_bw_bps, "crosslayer.min_bw_bps must not exceed crosslayer.max_bw_bps");
    }
    for (std::size_t i = 0; i < node_positions.size(); ++i) {
        if (!node_positions[i].set) {
            continue;
        }
        const std::string tag = "node." + std::to_string(i);
        require(i < node_count, tag + " references a node outside the scenario");
        require(node_positions[i].x_m >= 0 && node_positions[i].x_m <= area_x_m &&
                    node_positions[i].y_m >= 0 && node_positions[i].y_m <= area_y_m,
                tag + " position lies outside the area");
    }
    for (std::size_t i = 0; i < flows.size(); ++i) {
        const FlowConfig& f = flows[i];
        const std::string tag = "flow." + std::to_string(i);
        require(f.src < node_count, tag + ".src references node " + std::to_string(f.src) + " outside the " +
                                        std::to_string(node_count) + "-node scenario");
        require(f.dst < node_count, tag + ".dst references node " + std::to_string(f.dst) + " outside the " +
                                        std::to_string(node_count) + "-node scenario");
        require(f.src != f.dst, tag + ": src and dst must differ");
        require(f.rbw_bps > 0, tag + ".rbw_bps must be positive");
        require(f.rate_bps >= rate_min_bps && f.rate_bps <= rate_max_bps,
                tag + ".rate_bps must lie within [crosslayer.rate_min_bps, crosslayer.rate_max_bps]");
        require(f.packet_bytes > 0, tag + ".packet_bytes must be positive");
        require(f.start_s >= 0, tag + ".start_s must be nonnegative");
        if (f.stop_s) {
            require(*f.stop_s > f.start_s, tag + ".stop_s must exceed start_s");
        }
    }
    return issues;
}

namespace {

struct Parser {
    ScenarioConfig cfg;
    std::vector<std::string> errors;
    bool saw_sweep = false;
    std::string sweep_parameter;
    std::vector<double> sweep_values;
    std::vector<std::uint64_t> sweep_seeds;

    int line_no = 0;

    void fail(const std::string& msg) { errors.push_back("line " + std::to_string(line_no) + ": " + msg); }

    bool parse_double(const std::string& v, double& out) {
        try {
            std::size_t pos = 0;
            out = std::stod(v, &pos);
            while (pos < v.size() && std::isspace(static_cast<unsigned char>(v[pos]))) {
                ++pos;
            }
            if (pos != v.size()) {
                fail("trailing characters after number '" + v + "'");
                return false;
            }
            return true;
        } catch (const std::exception&) {
            fail("expected a number, got '" + v + "'");
            return false;
        }
    }

    bool parse_u32(const std::string& v, std::uint32_t& out) {
        double d = 0;
        if (!parse_double(v, d)) {
            return false;
        }
        if (d < 0 || d != std::floor(d) || d > 4294967295.0) {
            fail("expected a nonnegative integer, got '" + v + "'");
            return false;
        }
        out = static_cast<std::uint32_t>(d);
        return true;
    }

    bool parse_u64(const std::string& v, std::uint64_t& out) {
        try {
            std::size_t pos = 0;
            out = std::stoull(v, &pos);
            if (pos != v.size()) {
                fail("trailing characters after integer '" + v + "'");
                return false;
            }
            return true;
        } catch (const std::exception&) {
            fail("expected an integer, got '" + v + "'");
            return false;
        }
    }

    bool parse_bool(const std::string& v, bool& out) {
        if (v == "true" || v == "1" || v == "yes" || v == "on") {
            out = true;
            return true;
        }
        if (v == "false" || v == "0" || v == "no" || v == "off") {
            out = false;
            return true;
        }
        fail("expected a boolean, got '" + v + "'");
        return false;
    }

    FlowConfig& flow_at(std::size_t idx) {
        if (cfg.flows.size() <= idx) {
            cfg.flows.resize(idx + 1);
        }
        return cfg.flows[idx];
    }

    NodePosition& node_at(std::size_t idx) {
        if (cfg.node_positions.size() <= idx) {
            cfg.node_positions.resize(idx + 1);
        }
        cfg.node_positions[idx].set = true;
        return cfg.node_positions[idx];
    }

    void apply(const std::string& key, const std::string& value) {
        double d = 0;
        std::uint32_t u = 0;
        std::uint64_t u64 = 0;
        bool b = false;

        auto set_d = [&](double& field) {
            if (parse_double(value, d)) {
                field = d;
            }
        };
        auto set_opt_d = [&](std::optional<double>& field) {
            if (parse_double(value, d)) {
                field = d;
            }
        };
        auto set_u = [&](std::uint32_t& field) {
            if (parse_u32(value, u)) {
                field = u;
            }
        };
        auto set_b = [&](bool& field) {
            if (parse_bool(value, b)) {
                field = b;
            }
        };
        auto set_opt_b = [&](std::optional<bool>& field) {
            if (parse_bool(value, b)) {
                field = b;
            }
        };

        if (key == "sim.time_s") { set_d(cfg.sim_time_s); return; }
        if (key == "sim.master_seed") {
            if (parse_u64(value, u64)) {
                cfg.master_seed = u64;
            }
            return;
        }
        if (key == "sim.node_count") { set_u(cfg.node_count); return; }
        if (key == "sim.area_x_m") { set_d(cfg.area_x_m); return; }
        if (key == "sim.area_y_m") { set_d(cfg.area_y_m); return; }
        if (key == "sim.timeseries_interval_s") { set_d(cfg.timeseries_interval_s); return; }

        if (key == "protocol") {
            if (value == "mcba") {
                cfg.protocol = Protocol::Mcba;
            } else if (value == "aodv-baseline") {
                cfg.protocol = Protocol::AodvBaseline;
            } else {
                fail("protocol must be 'mcba' or 'aodv-baseline', got '" + value + "'");
            }
            return;
        }
        if (key == "toggles.link_filter") { set_opt_b(cfg.link_filter); return; }
        if (key == "toggles.power_control") { set_opt_b(cfg.power_control); return; }
        if (key == "toggles.congestion_control") { set_opt_b(cfg.congestion_control); return; }
        if (key == "toggles.admission_control") { set_opt_b(cfg.admission_control); return; }

        if (key == "mobility.speed_mps") { set_d(cfg.speed_mps); return; }
        if (key == "mobility.pause_s") { set_d(cfg.pause_s); return; }

        if (key == "radio.wavelength_m") { set_d(cfg.wavelength_m); return; }
        if (key == "radio.tx_gain") { set_d(cfg.tx_gain); return; }
        if (key == "radio.rx_gain") { set_d(cfg.rx_gain); return; }
        if (key == "radio.range_m") { set_d(cfg.range_m); return; }
        if (key == "radio.max_power_w") { set_d(cfg.max_power_w); return; }
        if (key == "radio.min_power_dbm") { set_d(cfg.min_power_dbm); return; }
        if (key == "radio.rx_threshold_dbm") { set_opt_d(cfg.rx_threshold_dbm); return; }
        if (key == "radio.cs_threshold_dbm") { set_opt_d(cfg.cs_threshold_dbm); return; }
        if (key == "radio.channel_rate_bps") { set_d(cfg.channel_rate_bps); return; }

        if (key == "energy.initial_j") { set_d(cfg.energy_initial_j); return; }
        if (key == "energy.rx_w") { set_d(cfg.energy_rx_w); return; }
        if (key == "energy.tx_w") { set_d(cfg.energy_tx_w); return; }
        if (key == "energy.idle_w") { set_d(cfg.energy_idle_w); return; }

        if (key == "mac.sifs_us") { set_d(cfg.sifs_us); return; }
        if (key == "mac.difs_us") { set_d(cfg.difs_us); return; }
        if (key == "mac.slot_us") { set_d(cfg.slot_us); return; }
        if (key == "mac.cw_min") { set_u(cfg.cw_min); return; }
        if (key == "mac.cw_max") { set_u(cfg.cw_max); return; }
        if (key == "mac.control_rate_bps") { set_d(cfg.control_rate_bps); return; }
        if (key == "mac.rts_bits") { set_u(cfg.rts_bits); return; }
        if (key == "mac.cts_bits") { set_u(cfg.cts_bits); return; }
        if (key == "mac.ack_bits") { set_u(cfg.ack_bits); return; }
        if (key == "mac.retry_limit") { set_u(cfg.retry_limit); return; }
        if (key == "mac.queue_limit") { set_u(cfg.queue_limit); return; }
        if (key == "mac.rts_at_max_power") { set_b(cfg.rts_at_max_power); return; }

        if (key == "aodv.active_route_timeout_s") { set_d(cfg.active_route_timeout_s); return; }
        if (key == "aodv.net_traversal_time_s") { set_d(cfg.net_traversal_time_s); return; }
        if (key == "aodv.rreq_retries") { set_u(cfg.rreq_retries); return; }
        if (key == "aodv.rreq_id_lifetime_s") { set_d(cfg.rreq_id_lifetime_s); return; }
        if (key == "aodv.hello_interval_s") { set_d(cfg.hello_interval_s); return; }
        if (key == "aodv.buffer_limit") { set_u(cfg.buffer_limit); return; }
        if (key == "aodv.ttl_limit") { set_u(cfg.ttl_limit); return; }

        if (key == "crosslayer.k") { set_d(cfg.k); return; }
        if (key == "crosslayer.rss_margin_db") { set_d(cfg.rss_margin_db); return; }
        if (key == "crosslayer.window_s") { set_d(cfg.window_s); return; }
        if (key == "crosslayer.t_rh_s") { set_opt_d(cfg.t_rh_s); return; }
        if (key == "crosslayer.wt") { set_d(cfg.wt); return; }
        if (key == "crosslayer.min_bw_bps") { set_opt_d(cfg.min_bw_bps); return; }
        if (key == "crosslayer.max_bw_bps") { set_opt_d(cfg.max_bw_bps); return; }
        if (key == "crosslayer.hysteresis") { set_d(cfg.hysteresis); return; }
        if (key == "crosslayer.fbw_subtract_quotient") { set_b(cfg.fbw_subtract_quotient); return; }
        if (key == "crosslayer.rate_min_bps") { set_d(cfg.rate_min_bps); return; }
        if (key == "crosslayer.rate_max_bps") { set_d(cfg.rate_max_bps); return; }

        if (key.rfind("flow.", 0) == 0) {
            const auto rest = key.substr(5);
            const auto dot = rest.find('.');
            if (dot == std::string::npos) {
                fail("flow keys look like flow.<index>.<field>, got '" + key + "'");
                return;
            }
            std::size_t idx = 0;
            const auto idx_str = rest.substr(0, dot);
            auto [p, ec] = std::from_chars(idx_str.data(), idx_str.data() + idx_str.size(), idx);
            if (ec != std::errc() || p != idx_str.data() + idx_str.size() || idx > 4096) {
                fail("bad flow index '" + idx_str + "'");
                return;
            }
            const auto field = rest.substr(dot + 1);
            FlowConfig& f = flow_at(idx);
            if (field == "src") { set_u(f.src); return; }
            if (field == "dst") { set_u(f.dst); return; }
            if (field == "rbw_bps") { set_d(f.rbw_bps); return; }
            if (field == "rate_bps") { set_d(f.rate_bps); return; }
            if (field == "packet_bytes") { set_u(f.packet_bytes); return; }
            if (field == "start_s") { set_d(f.start_s); return; }
            if (field == "stop_s") { set_opt_d(f.stop_s); return; }
            fail("unknown flow field '" + std::string(field) + "'");
            return;
        }

        if (key.rfind("node.", 0) == 0) {
            const auto rest = key.substr(5);
            const auto dot = rest.find('.');
            if (dot == std::string::npos) {
                fail("node keys look like node.<index>.<field>, got '" + key + "'");
                return;
            }
            std::size_t idx = 0;
            const auto idx_str = rest.substr(0, dot);
            auto [p, ec] = std::from_chars(idx_str.data(), idx_str.data() + idx_str.size(), idx);
            if (ec != std::errc() || p != idx_str.data() + idx_str.size() || idx > 65536) {
                fail("bad node index '" + idx_str + "'");
                return;
            }
            const auto field = rest.substr(dot + 1);
            NodePosition& n = node_at(idx);
            if (field == "x_m") { set_d(n.x_m); return; }
            if (field == "y_m") { set_d(n.y_m); return; }
            fail("unknown node field '" + std::string(field) + "'");
            return;
        }

        if (key == "sweep.parameter") {
            saw_sweep = true;
            sweep_parameter = value;
            return;
        }
        if (key == "sweep.values") {
            saw_sweep = true;
            std::stringstream ss(value);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                double v = 0;
                if (parse_double(tok, v)) {
                    sweep_values.push_back(v);
                }
            }
            return;
        }
        if (key == "sweep.seeds") {
            saw_sweep = true;
            std::stringstream ss(value);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                std::uint64_t v = 0;
                if (parse_u64(tok, v)) {
                    sweep_seeds.push_back(v);
                }
            }
            return;
        }

        fail("unknown key '" + key + "'");
    }

    void run(const std::string& text) {
        std::stringstream ss(text);
        std::string line;
        while (std::getline(ss, line)) {
            ++line_no;
            if (auto hash = line.find('#'); hash != std::string::npos) {
                line.erase(hash);
            }
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t\r");
                if (b == std::string::npos) {
                    return std::string();
                }
                const auto e = s.find_last_not_of(" \t\r");
                return s.substr(b, e - b + 1);
            };
            const std::string t = trim(line);
            if (t.empty()) {
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string::npos) {
                fail("expected key = value, got '" + t + "'");
                continue;
            }
            apply(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
        }
    }
};

} // namespace

ScenarioConfig parse_scenario(const std::string& text, const std::string& scenario_id) {
    Parser p;
    p.run(text);
    if (p.saw_sweep) {
        p.errors.push_back("sweep.* keys are only valid in a sweep spec");
    }
    if (!p.errors.empty()) {
        throw ScenarioError(std::move(p.errors));
    }
    p.cfg.scenario_id = scenario_id;
    auto issues = p.cfg.validate();
    if (!issues.empty()) {
        throw ScenarioError(std::move(issues));
    }
    return p.cfg;
}

namespace {
std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ScenarioError({"cannot open '" + path + "'"});
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string file_stem(const std::string& path) {
    auto slash = path.find_last_of("/\\");
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = name.find_last_of('.');
    if (dot != std::string::npos && dot > 0) {
        name.erase(dot);
    }
    return name.empty() ? "default" : name;
}
} // namespace

ScenarioConfig load_scenario_file(const std::string& path) { return parse_scenario(read_file(path), file_stem(path)); }

SweepSpec parse_sweep(const std::string& text, const std::string& scenario_id) {
    Parser p;
    p.run(text);
    std::vector<std::string> errors = std::move(p.errors);
    SweepSpec spec;
    if (p.sweep_parameter == "node_count") {
        spec.parameter = SweepParam::NodeCount;
    } else if (p.sweep_parameter == "pause") {
        spec.parameter = SweepParam::Pause;
    } else {
        errors.push_back("sweep.parameter must be 'node_count' or 'pause', got '" + p.sweep_parameter + "'");
    }
    if (p.sweep_values.empty()) {
        errors.push_back("sweep.values must list at least one value");
    }
    if (p.sweep_seeds.empty()) {
        errors.push_back("sweep.seeds must list at least one seed");
    }
    if (!errors.empty()) {
        throw ScenarioError(std::move(errors));
    }
    p.cfg.scenario_id = scenario_id;
    auto issues = p.cfg.validate();
    if (!issues.empty()) {
        throw ScenarioError(std::move(issues));
    }
    spec.base = std::move(p.cfg);
    spec.values = std::move(p.sweep_values);
    spec.seeds = std::move(p.sweep_seeds);
    return spec;
}

SweepSpec load_sweep_file(const std::string& path) { return parse_sweep(read_file(path), file_stem(path)); }

std::uint64_t cell_seed(std::uint64_t master_seed, double sweep_value, std::size_t seed_index, Protocol protocol) {
    std::uint64_t h = fnv1a64_u64(master_seed);
    std::uint64_t bits = 0;
    static_assert(sizeof(bits) == sizeof(sweep_value));
    std::memcpy(&bits, &sweep_value, sizeof(bits));
    h = fnv1a64_u64(bits, h);
    h = fnv1a64_u64(static_cast<std::uint64_t>(seed_index), h);
    h = fnv1a64_u64(static_cast<std::uint64_t>(protocol), h);
    return h;
}

std::string dump_scenario(const ScenarioConfig& c) {
    std::ostringstream out;
    out.precision(17);
    const Toggles t = c.toggles();
    out << "sim.time_s = " << c.sim_time_s << '\n';
    out << "sim.master_seed = " << c.master_seed << '\n';
    out << "sim.node_count = " << c.node_count << '\n';
    out << "sim.area_x_m = " << c.area_x_m << '\n';
    out << "sim.area_y_m = " << c.area_y_m << '\n';
    out << "sim.timeseries_interval_s = " << c.timeseries_interval_s << '\n';
    out << "protocol = " << protocol_label(c.protocol) << '\n';
    out << "toggles.link_filter = " << (t.link_filter ? "true" : "false") << '\n';
    out << "toggles.power_control = " << (t.power_control ? "true" : "false") << '\n';
    out << "toggles.congestion_control = " << (t.congestion_control ? "true" : "false") << '\n';
    out << "toggles.admission_control = " << (t.admission_control ? "true" : "false") << '\n';
    out << "mobility.speed_mps = " << c.speed_mps << '\n';
    out << "mobility.pause_s = " << c.pause_s << '\n';
    out << "radio.wavelength_m = " << c.wavelength_m << '\n';
    out << "radio.tx_gain = " << c.tx_gain << '\n';
    out << "radio.rx_gain = " << c.rx_gain << '\n';
    out << "radio.range_m = " << c.range_m << '\n';
    out << "radio.max_power_w = " << c.max_power_w << '\n';
    out << "radio.min_power_dbm = " << c.min_power_dbm << '\n';
    out << "radio.rx_threshold_dbm = " << c.radio_params().rx_threshold_dbm << '\n';
    out << "radio.cs_threshold_dbm = " << c.radio_params().carrier_sense_threshold_dbm << '\n';
    out << "radio.channel_rate_bps = " << c.channel_rate_bps << '\n';
    out << "energy.initial_j = " << c.energy_initial_j << '\n';
    out << "energy.rx_w = " << c.energy_rx_w << '\n';
    out << "energy.tx_w = " << c.energy_tx_w << '\n';
    out << "energy.idle_w = " << c.energy_idle_w << '\n';
    out << "mac.sifs_us = " << c.sifs_us << '\n';
    out << "mac.difs_us = " << c.difs_us << '\n';
    out << "mac.slot_us = " << c.slot_us << '\n';
    out << "mac.cw_min = " << c.cw_min << '\n';
    out << "mac.cw_max = " << c.cw_max << '\n';
    out << "mac.control_rate_bps = " << c.control_rate_bps << '\n';
    out << "mac.rts_bits = " << c.rts_bits << '\n';
    out << "mac.cts_bits = " << c.cts_bits << '\n';
    out << "mac.ack_bits = " << c.ack_bits << '\n';
    out << "mac.retry_limit = " << c.retry_limit << '\n';
    out << "mac.queue_limit = " << c.queue_limit << '\n';
    out << "mac.rts_at_max_power = " << (c.rts_at_max_power ? "true" : "false") << '\n';
    out << "aodv.active_route_timeout_s = " << c.active_route_timeout_s << '\n';
    out << "aodv.net_traversal_time_s = " << c.net_traversal_time_s << '\n';
    out << "aodv.rreq_retries = " << c.rreq_retries << '\n';
    out << "aodv.rreq_id_lifetime_s = " << c.rreq_id_lifetime_s << '\n';
    out << "aodv.hello_interval_s = " << c.hello_interval_s << '\n';
    out << "aodv.buffer_limit = " << c.buffer_limit << '\n';
    out << "aodv.ttl_limit = " << c.ttl_limit << '\n';
    out << "crosslayer.k = " << c.k << '\n';
    out << "crosslayer.rss_margin_db = " << c.rss_margin_db << '\n';
    out << "crosslayer.window_s = " << c.window_s << '\n';
    out << "crosslayer.t_rh_s = " << c.congestion_params().t_rh_s << '\n';
    out << "crosslayer.wt = " << c.wt << '\n';
    out << "crosslayer.min_bw_bps = " << c.admission_params().min_bw_bps << '\n';
    out << "crosslayer.max_bw_bps = " << c.admission_params().max_bw_bps << '\n';
    out << "crosslayer.hysteresis = " << c.hysteresis << '\n';
    out << "crosslayer.fbw_subtract_quotient = " << (c.fbw_subtract_quotient ? "true" : "false") << '\n';
    out << "crosslayer.rate_min_bps = " << c.rate_min_bps << '\n';
    out << "crosslayer.rate_max_bps = " << c.rate_max_bps << '\n';
    for (std::size_t i = 0; i < c.node_positions.size(); ++i) {
        if (!c.node_positions[i].set) {
            continue;
        }
        out << "node." << i << ".x_m = " << c.node_positions[i].x_m << '\n';
        out << "node." << i << ".y_m = " << c.node_positions[i].y_m << '\n';
    }
    for (std::size_t i = 0; i < c.flows.size(); ++i) {
        const FlowConfig& f = c.flows[i];
        const std::string p = "flow." + std::to_string(i) + ".";
        out << p << "src = " << f.src << '\n';
        out << p << "dst = " << f.dst << '\n';
        out << p << "rbw_bps = " << f.rbw_bps << '\n';
        out << p << "rate_bps = " << f.rate_bps << '\n';
        out << p << "packet_bytes = " << f.packet_bytes << '\n';
        out << p << "start_s = " << f.start_s << '\n';
        if (f.stop_s) {
            out << p << "stop_s = " << *f.stop_s << '\n';
        }
    }
    return out.str();
}

} // namespace manet
