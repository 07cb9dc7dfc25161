#pragma once

#include <stdexcept>
#include <string>

namespace inhibnet {

/// Malformed or invalid configuration. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A quantity is only known in limit form and the (drift, rate) pair has no table entry.
class UndecidableError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Argument outside the validity region of a bound or formula.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class SpectralError : public std::runtime_error {
public:
    enum class Code { UnboundedGamma, Reducible, NotConverged, NotFinite };

    SpectralError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Code code() const noexcept { return code_; }

private:
    Code code_;
};

/// Forward replay met a Possible event whose neuron state was never resolved.
class UnresolvedDependency : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace inhibnet
