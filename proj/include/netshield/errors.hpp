#pragma once

#include <stdexcept>
#include <string>

namespace netshield {

// Problem admits no feasible allocation (budget/bound structure).
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// Iterative machinery failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Post-solve certification of a result did not hold.
class CertificationError : public std::runtime_error {
public:
    explicit CertificationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace netshield
