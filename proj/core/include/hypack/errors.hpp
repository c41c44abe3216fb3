#pragma once

#include <stdexcept>
#include <string>

namespace hypack {

// Invalid arguments or points outside the model (bad (s,a), |p| >= 1, r <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A structural check failed: overlapping disks, broken flow law, bad permutation.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Infeasible rationalization or a numeric procedure that did not converge.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hypack
