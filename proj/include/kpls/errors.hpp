#pragma once

#include <stdexcept>
#include <string>

namespace kpls {

/// Base class for all toolkit errors.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or argument preconditions (CLI exit status 1).
class config_error : public error {
public:
    using error::error;
};

/// Malformed or inconsistent input data (CLI exit status 2).
class data_error : public error {
public:
    using error::error;
};

/// Numerical degeneracy: singular systems, constant responses, vanished
/// deflation (CLI exit status 3).
class degeneracy_error : public error {
public:
    using error::error;
};

} // namespace kpls
