// errors.hpp — Exception taxonomy shared by the library and the CLI exit codes

#pragma once

#include <stdexcept>
#include <string>

namespace oqs {

// Bad inputs: dimension mismatches, violated preconditions, malformed scenarios.
// The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// The computation itself failed: a residual exceeded its threshold, a null
// space was degenerate, a propagator was too ill-conditioned to invert.
// The CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem trouble while writing outputs. The CLI maps this to exit code 3.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace oqs
