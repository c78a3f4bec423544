#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace turbilink {

namespace detail {
inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}
}  // namespace detail

// Input outside the physical or mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    DomainError(std::string field, const std::string& what)
        : std::domain_error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// A quadrature or refinement loop gave up before reaching its tolerance.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double best_value, double error_estimate)
        : std::runtime_error(what + " (best value " + detail::sci(best_value) +
                             ", error estimate " + detail::sci(error_estimate) + ")"),
          best_value_(best_value),
          error_estimate_(error_estimate) {}
    double best_value() const noexcept { return best_value_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double best_value_;
    double error_estimate_;
};

// Too much probability left outside the computed OAM range.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, double tail_mass)
        : std::runtime_error(what), tail_mass_(tail_mass) {}
    double tail_mass() const noexcept { return tail_mass_; }

private:
    double tail_mass_;
};

// An internal invariant that should hold by construction was violated.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace turbilink
