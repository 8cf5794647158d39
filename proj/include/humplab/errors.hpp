#pragma once

#include <stdexcept>
#include <string>

namespace humplab {

// Error taxonomy shared by the C++ core, the C API status codes and the
// CLI exit codes: io = 1, argument = 2, hunt = 3, numeric = 4.
enum class ErrorKind : int {
    io = 1,
    argument = 2,
    hunt = 3,
    numeric = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct ArgumentError : Error {
    explicit ArgumentError(const std::string& w) : Error(ErrorKind::argument, w) {}
};

struct HuntFailure : Error {
    explicit HuntFailure(const std::string& w) : Error(ErrorKind::hunt, w) {}
};

struct NumericError : Error {
    explicit NumericError(const std::string& w) : Error(ErrorKind::numeric, w) {}
};

// Raised when an oscillation trajectory never returns to its initial state
// within the integrated horizon; callers typically retry with a longer one.
struct PeriodNotFound : NumericError {
    explicit PeriodNotFound(const std::string& w) : NumericError(w) {}
};

struct IoError : Error {
    explicit IoError(const std::string& w) : Error(ErrorKind::io, w) {}
};

} // namespace humplab
