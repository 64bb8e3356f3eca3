#pragma once

#include <stdexcept>
#include <string>

namespace progvar {

// Argument outside an operation's mathematical domain (n = 0, P > Q, ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string &what) : std::domain_error(what) {}
};

// Input exceeds sieve coverage, enumeration budget or 64-bit capacity.
class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace progvar
