#ifndef RHETOR_ERROR_HPP
#define RHETOR_ERROR_HPP

#include <stdexcept>
#include <string>

namespace rhetor {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised for malformed or inconsistent catalog files.
class CatalogError : public Error {
public:
    enum class Kind { Parse, Semantic };

    CatalogError(Kind kind, const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          kind_(kind), line_(line) {}

    Kind kind() const noexcept { return kind_; }
    int line() const noexcept { return line_; }

private:
    Kind kind_;
    int line_;
};

/// Bad input text or an unreadable file.
class InputError : public Error {
public:
    using Error::Error;
};

/// A caller violated an operation's precondition (out-of-range target, bad constraint, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// An internal consistency check failed. Indicates a bug, not bad input.
class InvariantError : public Error {
public:
    using Error::Error;
};

} // namespace rhetor

#endif
