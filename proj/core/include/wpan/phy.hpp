#pragma once

// Link budget, error probabilities and packet airtime.

#include <span>

#include "wpan/params.hpp"

namespace wpan {

/// A transmit setting over a given attenuation. rx_power is always
/// tx_level - pathloss; build through make().
struct LinkState {
    double pathloss_db;
    double tx_level_dbm;
    double rx_power_dbm;

    static LinkState make(double tx_level_dbm, double pathloss_db);
};

/// min(1, coeff_a * exp(-coeff_b * rx_power)).
double bit_error_probability(const BerModel& ber, double rx_power_dbm);

double received_power(double tx_level_dbm, double pathloss_db);

/// (l_overhead + payload) * t_byte.
double packet_airtime(const MacTiming& timing, const MacParams& mac, int payload_bytes);

/// Probability that at least one of the bits following the synchronization
/// preamble is in error: 1 - (1 - pr_bit)^((total - l_preamble) * 8).
/// Requires pr_bit in [0, 1] and total_packet_bytes > l_preamble.
double packet_error_probability(double pr_bit, int total_packet_bytes, const MacParams& mac);

/// Channel inversion: `thresholds` holds one ascending pathloss boundary per
/// adjacent pair of levels. A pathloss at or beyond the k-th boundary moves
/// the node up to the (k+1)-th lowest level.
double select_tx_level(const RadioProfile& profile, std::span<const double> thresholds, double pathloss_db);

}  // namespace wpan
