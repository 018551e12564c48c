#pragma once

// Flat `section.key = value` configuration files.
//
//   # comment
//   radio.p_idle = 712e-6
//   radio.p_tx_table = 0:0.03132, -1:0.0297      # dBm:W pairs
//   scenario.pathloss_dist = uniform              # or `fixed`
//   scenario.pathloss_low_db = 55
//
// Values are SI (seconds, watts, joules) except keys ending in _dbm/_db.
// Keys that are absent keep their documented defaults; repeated keys
// follow last-wins.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "wpan/params.hpp"

namespace wpan {

struct Config {
    RadioProfile radio;
    MacTiming timing;
    MacParams mac;
    BerModel ber;
    Scenario scenario;
    SimOptions sim;

    void validate() const;
    ModelParams model() const { return {radio, timing, mac, ber}; }

    friend bool operator==(const Config&, const Config&) = default;
};

/// Every key accepted by the parser, in serialization order.
const std::vector<std::string>& config_keys();

/// Parses and validates configuration text. Errors are ConfigError naming
/// the key (or the line, for syntax errors).
Config parse_config(std::string_view text, const Config& base = {});
Config load_config(const std::filesystem::path& path);

/// Applies one `key=value` override on top of `cfg` and revalidates.
void apply_override(Config& cfg, std::string_view assignment);

/// Writes every key; parse_config(serialize_config(c)) == c bit-for-bit.
std::string serialize_config(const Config& cfg);

}  // namespace wpan
