#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ma {

/// Bad input parameters (grid size, case parameters, configuration).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A requested problem size exceeds a documented limit.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// A sampled function or intermediate result is not finite.
class NonFiniteError : public std::runtime_error {
public:
    NonFiniteError(const std::string& what, std::size_t j, std::size_t k)
        : std::runtime_error(what + " at node (" + std::to_string(j) + "," + std::to_string(k) + ")"),
          j_(j), k_(k) {}

    std::size_t j() const noexcept { return j_; }
    std::size_t k() const noexcept { return k_; }

private:
    std::size_t j_;
    std::size_t k_;
};

/// Linear solver failure: singular factorisation, CG breakdown, zero pivot.
class SolverError : public std::runtime_error {
public:
    enum class Kind { singular, breakdown, zero_pivot, not_converged };

    SolverError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Internal consistency violation (e.g. a negative eigenvalue radicand beyond rounding).
class InconsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace ma
