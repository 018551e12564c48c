#pragma once

// Configurable constants of the modeled radio, MAC and scenario.
//
// Units are SI throughout: seconds, watts, joules. Only transmit levels
// (dBm) and pathloss (dB) are logarithmic.

#include <cstdint>
#include <variant>
#include <vector>

namespace wpan {

struct TxLevel {
    double dbm = 0.0;
    double power_w = 0.0;

    friend bool operator==(const TxLevel&, const TxLevel&) = default;
};

/// Default transmit table: the eight programmable CC2420 output levels.
///
/// Externally sourced, configurable. Currents are the datasheet figures
/// (0/-1/-3/-5/-7/-10/-15/-25 dBm: 17.4/16.5/15.2/13.9/12.5/11.2/9.9/8.5 mA)
/// at a 1.8 V supply, the voltage at which the measured 712 uW idle power
/// matches the datasheet idle current.
std::vector<TxLevel> default_tx_table();

/// Steady-state and transition characteristics of the transceiver.
struct RadioProfile {
    double p_idle = 712e-6;
    /// Externally sourced: 18.8 mA datasheet receive current at 1.8 V.
    double p_rx = 33.84e-3;
    double p_shutdown = 0.0;
    /// Strictly decreasing in dBm.
    std::vector<TxLevel> p_tx_table = default_tx_table();
    double t_si = 1e-3;
    double t_ia = 194e-6;
    /// Shutdown->idle transition energy; informational only.
    double e_si = 691e-12;

    void validate() const;

    /// Power drawn while transmitting at `dbm`; throws std::invalid_argument
    /// when the level is not in the table.
    double tx_power(double dbm) const;
    double max_level() const { return p_tx_table.front().dbm; }
    double min_level() const { return p_tx_table.back().dbm; }
    /// Levels sorted from lowest to highest dBm.
    std::vector<double> levels_ascending() const;

    friend bool operator==(const RadioProfile&, const RadioProfile&) = default;
};

struct MacTiming {
    double t_symbol = 16e-6;
    double t_byte = 32e-6;
    double t_slot = 320e-6;
    double t_ack_min = 192e-6;
    double t_ack_max = 864e-6;
    double t_ib_min = 15.36e-3;
    /// 19-byte minimal beacon frame.
    double t_beacon = 19 * 32e-6;
    /// 11-byte acknowledgement frame.
    double t_ack_frame = 11 * 32e-6;

    void validate() const;

    friend bool operator==(const MacTiming&, const MacTiming&) = default;
};

struct MacParams {
    int l_overhead = 13;
    int l_preamble = 4;
    int min_be = 3;
    int max_be_increments = 2;
    int cw_init = 2;
    int n_max = 5;

    void validate() const;

    friend bool operator==(const MacParams&, const MacParams&) = default;
};

/// Exponential bit-error regression: coeff_a * exp(-coeff_b * P_rx[dBm]).
struct BerModel {
    double coeff_a = 2.35e-30;
    double coeff_b = 0.659;

    void validate() const;

    friend bool operator==(const BerModel&, const BerModel&) = default;
};

struct FixedPathloss {
    double db = 70.0;
    friend bool operator==(const FixedPathloss&, const FixedPathloss&) = default;
};

struct UniformPathloss {
    double low_db = 55.0;
    double high_db = 95.0;
    friend bool operator==(const UniformPathloss&, const UniformPathloss&) = default;
};

using PathlossDistribution = std::variant<FixedPathloss, UniformPathloss>;

struct Scenario {
    int nodes_per_channel = 100;
    int payload_bytes = 120;
    int beacon_order = 6;
    PathlossDistribution pathloss = UniformPathloss{};
    /// Informational; the energy model works per superframe.
    double data_rate_per_node = 1000.0;

    void validate() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Monte Carlo knobs that are not part of the protocol itself.
struct SimOptions {
    std::uint64_t superframes = 10000;
    /// When set, the acknowledgement exchange after a clean transmission
    /// keeps the channel busy for t_ack_min + t_ack_frame.
    bool ack_occupies_channel = true;
    /// Worker threads for table builds and long runs; 0 picks the hardware
    /// concurrency. Results do not depend on this value.
    unsigned workers = 0;

    void validate() const;

    friend bool operator==(const SimOptions&, const SimOptions&) = default;
};

/// The parameters consumed by the closed-form model.
struct ModelParams {
    RadioProfile radio;
    MacTiming timing;
    MacParams mac;
    BerModel ber;

    void validate() const;
};

}  // namespace wpan
