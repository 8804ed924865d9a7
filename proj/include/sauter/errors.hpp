#pragma once

#include <stdexcept>
#include <string>

namespace sauter {

/// Invalid or unparsable run configuration. The message names the offending key.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Propagation aborted because a state lost unitarity.
class NumericalAbort : public std::runtime_error {
  public:
    NumericalAbort(const std::string &what, long mode)
        : std::runtime_error(what), mode_(mode) {}

    /// Signed index of the initial negative-energy mode whose state failed.
    long mode() const noexcept { return mode_; }

  private:
    long mode_;
};

} // namespace sauter
