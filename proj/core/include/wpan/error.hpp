#pragma once

#include <stdexcept>
#include <string>

namespace wpan {

/// Raised for malformed configuration input or a violated parameter
/// invariant. `key()` names the offending configuration key
/// (e.g. "mac.t_ack_min"); it is empty when the error is not tied to a key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace wpan
