#pragma once

#include <stdexcept>
#include <string>

namespace lppls {

// Invalid input data (CSV contents, malformed prices, bad dates).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Violated operation precondition (bad window, index out of range, ...).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace lppls
