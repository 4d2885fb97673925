#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stk {

/// Input text does not conform to the expression grammar (or names an
/// unknown coordinate, or uses a transcendental under the exact backend).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t position)
        : std::runtime_error(message + " (at position " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Evaluation hit a zero denominator or a non-finite intermediate value.
class PoleError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operands belong to different charts or different backends.
class MixedOperandError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A matrix that must be invertible is singular (identically, or at the
/// requested point).
class SingularError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed system or matrix description file.
class SchemaError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An iterative solve failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A step of a trajectory integration failed; carries the step index.
class FlowError : public std::runtime_error {
public:
    FlowError(const std::string& message, long step)
        : std::runtime_error("step " + std::to_string(step) + ": " + message), step_(step) {}

    long step() const noexcept { return step_; }

private:
    long step_;
};

} // namespace stk
