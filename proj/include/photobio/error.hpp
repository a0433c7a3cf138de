#pragma once

#include <stdexcept>
#include <string>

namespace photobio {

// Every failure the library reports derives from Error; kind() names the
// category for the CLI's machine-readable error record.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "Error"; }
};

class ConfigError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "ConfigError"; }
};

class CalibrationError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "CalibrationError"; }
};

class ConvergenceError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "ConvergenceError"; }
};

class SolverError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "SolverError"; }
};

class IoError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "IoError"; }
};

}  // namespace photobio
