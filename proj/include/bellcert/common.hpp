#pragma once

#include <stdexcept>
#include <string>

namespace bellcert {

// Raised when an enumeration or table size guard is exceeded (CLI exit code 3).
class resource_limit_error : public std::runtime_error {
public:
    explicit resource_limit_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an internal LP/SDP solve fails in a way the caller cannot
// recover from (CLI exit code 4).
class solver_error : public std::runtime_error {
public:
    explicit solver_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace bellcert
