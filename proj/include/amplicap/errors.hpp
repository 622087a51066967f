#pragma once

#include <stdexcept>
#include <string>

namespace amplicap {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Channel matrix is (numerically) rank deficient.
class DegenerateChannel : public Error {
public:
    using Error::Error;
};

/// Invalid estimator or sweep configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A root finder or line search did not converge.
class SolverError : public Error {
public:
    using Error::Error;
};

/// Caller broke a documented precondition on an argument.
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// CSV or config file does not follow the expected schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace amplicap
