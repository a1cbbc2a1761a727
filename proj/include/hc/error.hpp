#pragma once

#include <stdexcept>
#include <string>

namespace hc {

// Error taxonomy mirrored by the CLI exit codes: malformed input or
// out-of-range parameters (2), a target the run could not meet after
// retries (3), and requests beyond the supported desk scale (4).
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

struct TargetMissed : std::runtime_error {
    explicit TargetMissed(const std::string& what) : std::runtime_error(what) {}
};

struct ScaleGuard : std::runtime_error {
    explicit ScaleGuard(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hc
