#ifndef ESTSAT_ERRORS_HPP
#define ESTSAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace estsat {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input file or instance description.
struct ParseError : Error {
    using Error::Error;
};

// Instance exceeds an exhaustion cap (d^n, 3^n, orbit size, ...).
struct CapacityError : Error {
    using Error::Error;
};

// An operation's documented precondition does not hold.
struct PreconditionError : Error {
    using Error::Error;
};

// A required external plugin is missing or unusable.
struct PluginError : Error {
    using Error::Error;
};

} // namespace estsat

#endif
