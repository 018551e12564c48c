#include "wpan/phy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wpan {

LinkState LinkState::make(double tx_level_dbm, double pathloss_db) {
    return {pathloss_db, tx_level_dbm, received_power(tx_level_dbm, pathloss_db)};
}

double bit_error_probability(const BerModel& ber, double rx_power_dbm) {
    const double p = ber.coeff_a * std::exp(-ber.coeff_b * rx_power_dbm);
    return std::isnan(p) ? 1.0 : std::min(1.0, p);
}

double received_power(double tx_level_dbm, double pathloss_db) { return tx_level_dbm - pathloss_db; }

double packet_airtime(const MacTiming& timing, const MacParams& mac, int payload_bytes) {
    if (payload_bytes < 0) throw std::invalid_argument("packet_airtime: payload_bytes must be >= 0");
    return (mac.l_overhead + payload_bytes) * timing.t_byte;
}

double packet_error_probability(double pr_bit, int total_packet_bytes, const MacParams& mac) {
    if (!(pr_bit >= 0.0 && pr_bit <= 1.0))
        throw std::domain_error("packet_error_probability: pr_bit must be in [0, 1]");
    if (total_packet_bytes <= mac.l_preamble)
        throw std::domain_error("packet_error_probability: packet must be longer than the preamble");
    const double bits = 8.0 * (total_packet_bytes - mac.l_preamble);
    if (pr_bit == 1.0) return 1.0;
    return -std::expm1(bits * std::log1p(-pr_bit));
}

double select_tx_level(const RadioProfile& profile, std::span<const double> thresholds, double pathloss_db) {
    const auto levels = profile.levels_ascending();
    if (thresholds.size() + 1 != levels.size())
        throw std::invalid_argument("select_tx_level: expected " + std::to_string(levels.size() - 1) +
                                    " thresholds, got " + std::to_string(thresholds.size()));
    for (std::size_t i = 1; i < thresholds.size(); ++i)
        if (!(thresholds[i - 1] <= thresholds[i]))
            throw std::invalid_argument("select_tx_level: thresholds must be ascending");
    std::size_t k = 0;
    while (k < thresholds.size() && pathloss_db >= thresholds[k]) ++k;
    return levels[k];
}

}  // namespace wpan
