#pragma once

#include <stdexcept>
#include <string>

namespace catvortex {

/// Base class for every error raised by the library. `kind()` is the stable
/// machine-readable tag used in CLI error records.
class VortexError : public std::runtime_error {
public:
    VortexError(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

/// Two vortices came closer than the collision floor on the pair kernel.
class CollisionError : public VortexError {
public:
    explicit CollisionError(const std::string& what) : VortexError("CollisionError", what) {}
};

/// The adaptive controller could not meet the tolerance at the minimum step.
class StepFailure : public VortexError {
public:
    explicit StepFailure(const std::string& what) : VortexError("StepFailure", what) {}
};

class NoRootError : public VortexError {
public:
    explicit NoRootError(const std::string& what) : VortexError("NoRootError", what) {}
};

/// Requested operation is outside the supported regime (mixed-sign pairs).
class UnsupportedError : public VortexError {
public:
    explicit UnsupportedError(const std::string& what) : VortexError("UnsupportedError", what) {}
};

/// A relative separation outside the energetically allowed window.
class InadmissibleError : public VortexError {
public:
    explicit InadmissibleError(const std::string& what) : VortexError("InadmissibleError", what) {}
};

class PerturbationTooLarge : public VortexError {
public:
    explicit PerturbationTooLarge(const std::string& what)
        : VortexError("PerturbationTooLarge", what) {}
};

class WindowEmpty : public VortexError {
public:
    explicit WindowEmpty(const std::string& what) : VortexError("WindowEmpty", what) {}
};

class ConfigError : public VortexError {
public:
    explicit ConfigError(const std::string& what) : VortexError("ConfigError", what) {}
};

}  // namespace catvortex
