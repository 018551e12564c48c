#include "wpan/params.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "wpan/error.hpp"

namespace wpan {

namespace {

constexpr double kSupplyVolts = 1.8;

void require(bool ok, const char* key, const std::string& msg) {
    if (!ok) throw ConfigError(key, msg);
}

bool close_rel(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); }

}  // namespace

std::vector<TxLevel> default_tx_table() {
    return {
        {0.0, 17.4e-3 * kSupplyVolts},   {-1.0, 16.5e-3 * kSupplyVolts},
        {-3.0, 15.2e-3 * kSupplyVolts},  {-5.0, 13.9e-3 * kSupplyVolts},
        {-7.0, 12.5e-3 * kSupplyVolts},  {-10.0, 11.2e-3 * kSupplyVolts},
        {-15.0, 9.9e-3 * kSupplyVolts},  {-25.0, 8.5e-3 * kSupplyVolts},
    };
}

void RadioProfile::validate() const {
    require(std::isfinite(p_idle) && p_idle >= 0, "radio.p_idle", "must be a finite power >= 0");
    require(std::isfinite(p_rx) && p_rx >= 0, "radio.p_rx", "must be a finite power >= 0");
    require(std::isfinite(p_shutdown) && p_shutdown >= 0, "radio.p_shutdown", "must be a finite power >= 0");
    require(p_idle < p_rx, "radio.p_idle", "must be below radio.p_rx");
    require(std::isfinite(t_si) && t_si > 0, "radio.t_si", "must be a duration > 0");
    require(std::isfinite(t_ia) && t_ia > 0, "radio.t_ia", "must be a duration > 0");
    require(std::isfinite(e_si) && e_si >= 0, "radio.e_si", "must be an energy >= 0");
    require(!p_tx_table.empty(), "radio.p_tx_table", "must not be empty");
    for (std::size_t i = 0; i < p_tx_table.size(); ++i) {
        const auto& level = p_tx_table[i];
        require(std::isfinite(level.dbm), "radio.p_tx_table", "level must be finite");
        require(std::isfinite(level.power_w) && level.power_w > 0, "radio.p_tx_table",
                "transmit power must be > 0");
        if (i > 0)
            require(level.dbm < p_tx_table[i - 1].dbm, "radio.p_tx_table",
                    "levels must be strictly decreasing in dBm");
    }
}

double RadioProfile::tx_power(double dbm) const {
    for (const auto& level : p_tx_table)
        if (level.dbm == dbm) return level.power_w;
    throw std::invalid_argument("unknown transmit level " + std::to_string(dbm) + " dBm");
}

std::vector<double> RadioProfile::levels_ascending() const {
    std::vector<double> out;
    out.reserve(p_tx_table.size());
    for (auto it = p_tx_table.rbegin(); it != p_tx_table.rend(); ++it) out.push_back(it->dbm);
    return out;
}

void MacTiming::validate() const {
    const std::pair<const char*, double> durations[] = {
        {"mac.t_symbol", t_symbol},     {"mac.t_byte", t_byte},       {"mac.t_slot", t_slot},
        {"mac.t_ack_min", t_ack_min},   {"mac.t_ack_max", t_ack_max}, {"mac.t_ib_min", t_ib_min},
        {"mac.t_beacon", t_beacon},     {"mac.t_ack_frame", t_ack_frame},
    };
    for (const auto& [key, value] : durations)
        require(std::isfinite(value) && value > 0, key, "must be a duration > 0");
    require(close_rel(t_byte, 2 * t_symbol), "mac.t_byte", "must equal 2 * mac.t_symbol");
    require(close_rel(t_slot, 20 * t_symbol), "mac.t_slot", "must equal 20 * mac.t_symbol");
    require(t_ack_min < t_ack_max, "mac.t_ack_min", "must be below mac.t_ack_max");
}

void MacParams::validate() const {
    require(l_overhead >= 1, "mac.l_overhead", "must be >= 1");
    require(l_preamble >= 0, "mac.l_preamble", "must be >= 0");
    require(l_preamble < l_overhead, "mac.l_preamble", "must be below mac.l_overhead");
    require(min_be >= 0 && min_be <= 30, "mac.min_be", "must be in [0, 30]");
    require(max_be_increments >= 0 && min_be + max_be_increments <= 30, "mac.max_be_increments",
            "must be >= 0 with min_be + increments <= 30");
    require(cw_init >= 1, "mac.cw_init", "must be >= 1");
    require(n_max >= 1, "mac.n_max", "must be >= 1");
}

void BerModel::validate() const {
    require(std::isfinite(coeff_a) && coeff_a > 0, "phy.coeff_a", "must be > 0");
    require(std::isfinite(coeff_b) && coeff_b > 0, "phy.coeff_b", "must be > 0");
}

void Scenario::validate() const {
    require(nodes_per_channel >= 1, "scenario.nodes_per_channel", "must be >= 1");
    require(payload_bytes >= 1, "scenario.payload_bytes", "must be >= 1");
    require(beacon_order >= 0 && beacon_order <= 15, "scenario.beacon_order", "must be in [0, 15]");
    require(std::isfinite(data_rate_per_node) && data_rate_per_node >= 0, "scenario.data_rate_per_node",
            "must be >= 0");
    if (const auto* u = std::get_if<UniformPathloss>(&pathloss)) {
        require(std::isfinite(u->low_db) && std::isfinite(u->high_db), "scenario.pathloss_low_db",
                "must be finite");
        require(u->low_db < u->high_db, "scenario.pathloss_low_db", "must be below scenario.pathloss_high_db");
    } else {
        require(std::isfinite(std::get<FixedPathloss>(pathloss).db), "scenario.pathloss_db", "must be finite");
    }
}

void SimOptions::validate() const {
    require(superframes >= 1, "sim.superframes", "must be >= 1");
}

void ModelParams::validate() const {
    radio.validate();
    timing.validate();
    mac.validate();
    ber.validate();
}

}  // namespace wpan
