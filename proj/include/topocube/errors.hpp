#ifndef TOPOCUBE_ERRORS_HPP
#define TOPOCUBE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace topocube {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input data or a violated precondition; the CLI maps these to exit code 2.
struct ValidationError : Error {
    using Error::Error;
};

// Malformed textual input (DIMACS, edge lists). Carries the 1-based line number.
struct ParseError : ValidationError {
    int line;
    ParseError(const std::string& msg, int line_no)
        : ValidationError(msg + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
};

// A requested computation would exceed an enumeration or size cap.
struct CapExceeded : ValidationError {
    using ValidationError::ValidationError;
};

}  // namespace topocube

#endif
