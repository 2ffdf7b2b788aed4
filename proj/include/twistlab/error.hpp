#pragma once

#include <stdexcept>
#include <string>

namespace twistlab {

// Input outside the mathematical domain of an operation (CLI exit code 1).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Work would exceed a configured size or time budget (CLI exit code 2).
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An iterative or adaptive method failed to reach its tolerance (CLI exit code 2).
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double achieved = 0.0)
        : std::runtime_error(what), achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

} // namespace twistlab
