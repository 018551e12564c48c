#include "wpan/config.hpp"

#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "wpan/csv.hpp"
#include "wpan/error.hpp"

namespace wpan {

namespace {

struct Field {
    std::string key;
    std::function<void(Config&, std::string_view)> set;
    std::function<std::string(const Config&)> get;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double to_double(std::string_view key, std::string_view v) {
    try {
        return parse_double(v, key);
    } catch (const std::invalid_argument&) {
        throw ConfigError(std::string(key), "expected a number, got '" + std::string(v) + "'");
    }
}

long long to_integer(std::string_view key, std::string_view v) {
    try {
        return parse_integer(v, key);
    } catch (const std::invalid_argument&) {
        throw ConfigError(std::string(key), "expected an integer, got '" + std::string(v) + "'");
    }
}

int to_int(std::string_view key, std::string_view v) {
    auto n = to_integer(key, v);
    if (n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max())
        throw ConfigError(std::string(key), "out of range");
    return static_cast<int>(n);
}

bool to_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(std::string(key), "expected true/false, got '" + std::string(v) + "'");
}

std::vector<TxLevel> to_tx_table(std::string_view key, std::string_view v) {
    std::vector<TxLevel> out;
    while (!v.empty()) {
        auto comma = v.find(',');
        auto item = trim(v.substr(0, comma));
        v = comma == std::string_view::npos ? std::string_view{} : v.substr(comma + 1);
        if (item.empty()) continue;
        auto colon = item.find(':');
        if (colon == std::string_view::npos)
            throw ConfigError(std::string(key), "expected dbm:watts pairs, got '" + std::string(item) + "'");
        out.push_back({to_double(key, trim(item.substr(0, colon))), to_double(key, trim(item.substr(colon + 1)))});
    }
    return out;
}

std::string from_tx_table(const std::vector<TxLevel>& table) {
    std::string out;
    for (const auto& level : table) {
        if (!out.empty()) out += ", ";
        out += format_double(level.dbm) + ":" + format_double(level.power_w);
    }
    return out;
}

template <class Get>
Field real(std::string key, Get member) {
    return {key,
            [key, member](Config& c, std::string_view v) { member(c) = to_double(key, v); },
            [member](const Config& c) { return format_double(member(const_cast<Config&>(c))); }};
}

template <class Get>
Field integer(std::string key, Get member) {
    return {key,
            [key, member](Config& c, std::string_view v) { member(c) = to_int(key, v); },
            [member](const Config& c) { return std::to_string(member(const_cast<Config&>(c))); }};
}

FixedPathloss& fixed_pathloss(Config& c, std::string_view key) {
    auto* f = std::get_if<FixedPathloss>(&c.scenario.pathloss);
    if (!f) throw ConfigError(std::string(key), "requires scenario.pathloss_dist = fixed");
    return *f;
}

UniformPathloss& uniform_pathloss(Config& c, std::string_view key) {
    auto* u = std::get_if<UniformPathloss>(&c.scenario.pathloss);
    if (!u) throw ConfigError(std::string(key), "requires scenario.pathloss_dist = uniform");
    return *u;
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        f.push_back(real("radio.p_idle", [](Config& c) -> double& { return c.radio.p_idle; }));
        f.push_back(real("radio.p_rx", [](Config& c) -> double& { return c.radio.p_rx; }));
        f.push_back(real("radio.p_shutdown", [](Config& c) -> double& { return c.radio.p_shutdown; }));
        f.push_back({"radio.p_tx_table",
                     [](Config& c, std::string_view v) { c.radio.p_tx_table = to_tx_table("radio.p_tx_table", v); },
                     [](const Config& c) { return from_tx_table(c.radio.p_tx_table); }});
        f.push_back(real("radio.t_si", [](Config& c) -> double& { return c.radio.t_si; }));
        f.push_back(real("radio.t_ia", [](Config& c) -> double& { return c.radio.t_ia; }));
        f.push_back(real("radio.e_si", [](Config& c) -> double& { return c.radio.e_si; }));

        f.push_back(real("mac.t_symbol", [](Config& c) -> double& { return c.timing.t_symbol; }));
        f.push_back(real("mac.t_byte", [](Config& c) -> double& { return c.timing.t_byte; }));
        f.push_back(real("mac.t_slot", [](Config& c) -> double& { return c.timing.t_slot; }));
        f.push_back(real("mac.t_ack_min", [](Config& c) -> double& { return c.timing.t_ack_min; }));
        f.push_back(real("mac.t_ack_max", [](Config& c) -> double& { return c.timing.t_ack_max; }));
        f.push_back(real("mac.t_ib_min", [](Config& c) -> double& { return c.timing.t_ib_min; }));
        f.push_back(real("mac.t_beacon", [](Config& c) -> double& { return c.timing.t_beacon; }));
        f.push_back(real("mac.t_ack_frame", [](Config& c) -> double& { return c.timing.t_ack_frame; }));
        f.push_back(integer("mac.l_overhead", [](Config& c) -> int& { return c.mac.l_overhead; }));
        f.push_back(integer("mac.l_preamble", [](Config& c) -> int& { return c.mac.l_preamble; }));
        f.push_back(integer("mac.min_be", [](Config& c) -> int& { return c.mac.min_be; }));
        f.push_back(integer("mac.max_be_increments", [](Config& c) -> int& { return c.mac.max_be_increments; }));
        f.push_back(integer("mac.cw_init", [](Config& c) -> int& { return c.mac.cw_init; }));
        f.push_back(integer("mac.n_max", [](Config& c) -> int& { return c.mac.n_max; }));

        f.push_back(real("phy.coeff_a", [](Config& c) -> double& { return c.ber.coeff_a; }));
        f.push_back(real("phy.coeff_b", [](Config& c) -> double& { return c.ber.coeff_b; }));

        f.push_back(integer("scenario.nodes_per_channel",
                            [](Config& c) -> int& { return c.scenario.nodes_per_channel; }));
        f.push_back(integer("scenario.payload_bytes", [](Config& c) -> int& { return c.scenario.payload_bytes; }));
        f.push_back(integer("scenario.beacon_order", [](Config& c) -> int& { return c.scenario.beacon_order; }));
        // pathloss_dist must precede the *_db keys: application order is this order.
        f.push_back({"scenario.pathloss_dist",
                     [](Config& c, std::string_view v) {
                         if (v == "fixed") {
                             if (!std::holds_alternative<FixedPathloss>(c.scenario.pathloss))
                                 c.scenario.pathloss = FixedPathloss{};
                         } else if (v == "uniform") {
                             if (!std::holds_alternative<UniformPathloss>(c.scenario.pathloss))
                                 c.scenario.pathloss = UniformPathloss{};
                         } else {
                             throw ConfigError("scenario.pathloss_dist",
                                               "expected 'fixed' or 'uniform', got '" + std::string(v) + "'");
                         }
                     },
                     [](const Config& c) {
                         return std::string(std::holds_alternative<FixedPathloss>(c.scenario.pathloss) ? "fixed"
                                                                                                         : "uniform");
                     }});
        f.push_back({"scenario.pathloss_db",
                     [](Config& c, std::string_view v) {
                         fixed_pathloss(c, "scenario.pathloss_db").db = to_double("scenario.pathloss_db", v);
                     },
                     nullptr});
        f.push_back({"scenario.pathloss_low_db",
                     [](Config& c, std::string_view v) {
                         uniform_pathloss(c, "scenario.pathloss_low_db").low_db =
                             to_double("scenario.pathloss_low_db", v);
                     },
                     nullptr});
        f.push_back({"scenario.pathloss_high_db",
                     [](Config& c, std::string_view v) {
                         uniform_pathloss(c, "scenario.pathloss_high_db").high_db =
                             to_double("scenario.pathloss_high_db", v);
                     },
                     nullptr});
        f.push_back(real("scenario.data_rate_per_node",
                         [](Config& c) -> double& { return c.scenario.data_rate_per_node; }));

        f.push_back({"sim.superframes",
                     [](Config& c, std::string_view v) {
                         auto n = to_integer("sim.superframes", v);
                         if (n < 1) throw ConfigError("sim.superframes", "must be >= 1");
                         c.sim.superframes = static_cast<std::uint64_t>(n);
                     },
                     [](const Config& c) { return std::to_string(c.sim.superframes); }});
        f.push_back({"sim.ack_occupies_channel",
                     [](Config& c, std::string_view v) {
                         c.sim.ack_occupies_channel = to_bool("sim.ack_occupies_channel", v);
                     },
                     [](const Config& c) { return std::string(c.sim.ack_occupies_channel ? "true" : "false"); }});
        f.push_back({"sim.workers",
                     [](Config& c, std::string_view v) {
                         auto n = to_integer("sim.workers", v);
                         if (n < 0) throw ConfigError("sim.workers", "must be >= 0");
                         c.sim.workers = static_cast<unsigned>(n);
                     },
                     [](const Config& c) { return std::to_string(c.sim.workers); }});
        return f;
    }();
    return table;
}

const Field* find_field(std::string_view key) {
    for (const auto& f : fields())
        if (f.key == key) return &f;
    return nullptr;
}

// Applies collected assignments in registry order so that the file's own
// line order never matters.
void apply_all(Config& cfg, const std::map<std::string, std::string, std::less<>>& assignments) {
    for (const auto& f : fields()) {
        auto it = assignments.find(f.key);
        if (it != assignments.end()) f.set(cfg, it->second);
    }
    cfg.validate();
}

std::pair<std::string, std::string> split_assignment(std::string_view line, std::string_view where) {
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
        throw ConfigError("", std::string(where) + ": expected 'key = value', got '" + std::string(line) + "'");
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
        throw ConfigError("", std::string(where) + ": expected 'key = value', got '" + std::string(line) + "'");
    if (!find_field(key)) throw ConfigError(std::string(key), "unknown key");
    return {std::string(key), std::string(value)};
}

}  // namespace

void Config::validate() const {
    radio.validate();
    timing.validate();
    mac.validate();
    ber.validate();
    scenario.validate();
    sim.validate();
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> out;
        for (const auto& f : fields()) out.push_back(f.key);
        return out;
    }();
    return keys;
}

Config parse_config(std::string_view text, const Config& base) {
    std::map<std::string, std::string, std::less<>> assignments;
    std::size_t lineno = 0;
    while (!text.empty()) {
        auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto [key, value] = split_assignment(line, "line " + std::to_string(lineno));
        assignments[key] = value;
    }
    Config cfg = base;
    apply_all(cfg, assignments);
    return cfg;
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void apply_override(Config& cfg, std::string_view assignment) {
    auto [key, value] = split_assignment(trim(assignment), "--set");
    Config next = cfg;
    find_field(key)->set(next, value);
    next.validate();
    cfg = std::move(next);
}

std::string serialize_config(const Config& cfg) {
    std::string out;
    for (const auto& f : fields()) {
        std::string value;
        if (f.get) {
            value = f.get(cfg);
        } else if (const auto* fixed = std::get_if<FixedPathloss>(&cfg.scenario.pathloss)) {
            if (f.key != "scenario.pathloss_db") continue;
            value = format_double(fixed->db);
        } else {
            const auto& u = std::get<UniformPathloss>(cfg.scenario.pathloss);
            if (f.key == "scenario.pathloss_low_db") value = format_double(u.low_db);
            else if (f.key == "scenario.pathloss_high_db") value = format_double(u.high_db);
            else continue;
        }
        out += f.key + " = " + value + "\n";
    }
    return out;
}

}  // namespace wpan
