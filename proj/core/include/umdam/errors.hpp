#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace umdam {

/// Invalid DRAM/system configuration (bad geometry, unknown JSON key, overflow).
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Linear address or coordinate outside the configured address space.
class AddressError : public std::out_of_range {
  public:
    AddressError(const std::string& what, std::uint64_t value)
        : std::out_of_range(what), value_(value) {}

    std::uint64_t value() const noexcept { return value_; }

  private:
    std::uint64_t value_;
};

class ArgumentError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A layout or workload does not fit in the configured DRAM capacity.
class CapacityError : public ConfigError {
  public:
    using ConfigError::ConfigError;
};

/// A request stream could not be replayed; carries the offending sequence number.
class ReplayError : public std::runtime_error {
  public:
    ReplayError(const std::string& what, std::uint64_t seq)
        : std::runtime_error(what), seq_(seq) {}

    std::uint64_t sequence() const noexcept { return seq_; }

  private:
    std::uint64_t seq_;
};

}  // namespace umdam
