#ifndef BROWNSIM_ERRORS_HPP
#define BROWNSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace brownsim {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid configuration or generation parameters.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Numeric argument outside its admissible range.
class DomainError : public Error {
public:
    using Error::Error;
};

// Interval index outside the workload horizon.
class HorizonError : public Error {
public:
    using Error::Error;
};

// Malformed trace or tabular input file.
class ParseError : public Error {
public:
    using Error::Error;
};

// A VM could not be placed within fleet capacity.
class PlacementError : public Error {
public:
    using Error::Error;
};

// A migration plan is inconsistent with the state it is applied to.
class PlanError : public Error {
public:
    using Error::Error;
};

// Invalid input to a statistics routine.
class StatsError : public Error {
public:
    using Error::Error;
};

// Filesystem / IO failure.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace brownsim

#endif
