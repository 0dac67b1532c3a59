#pragma once

#include <stdexcept>
#include <string>

namespace gsm {

// Input outside the mathematical domain of an operation (bad m, u, v, alpha...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Request exceeds a configured size limit (sieve capacity, exact-mode order).
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

// An internal consistency check failed. Always a bug.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace gsm
