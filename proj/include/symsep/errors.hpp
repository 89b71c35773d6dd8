#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace symsep {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on the mathematical input failed (wrong N, bad cut, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A dimension cap from Limits was exceeded.
class ResourceError : public Error {
public:
    ResourceError(const std::string& what, std::size_t requested, std::size_t cap)
        : Error(what + " (requested " + std::to_string(requested) + ", cap " +
                std::to_string(cap) + ")"),
          requested_(requested),
          cap_(cap) {}

    std::size_t requested() const noexcept { return requested_; }
    std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t requested_;
    std::size_t cap_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
        : Error(line ? what + " at line " + std::to_string(line) + ", column " +
                           std::to_string(column)
                     : what),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// The construction exists mathematically but does not apply to this input
/// (odd N embedding, state outside the qutrit slice, NPT input to decompose).
class ApplicabilityError : public Error {
public:
    using Error::Error;
};

class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// A CP verdict is known only through the DNN = CP equality for small sides,
/// without an explicit nonnegative factor to build on.
class ExistenceOnlyError : public ApplicabilityError {
public:
    using ApplicabilityError::ApplicabilityError;
};

}  // namespace symsep
