#pragma once

#include <stdexcept>
#include <string>

namespace tent {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A simplex whose minimum altitude is below 1e-12 of its diameter.
class DegenerateSimplex : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent input document. `line` is 1-based, 0 if unknown.
class ValidationError : public Error {
public:
    ValidationError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class NotFound : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class OutOfDomain : public Error {
public:
    using Error::Error;
};

/// A runtime invariant of the meshing loop failed (non-causal facet, missed
/// progress guarantee, ...).
class ContractViolation : public Error {
public:
    using Error::Error;
};

}  // namespace tent
