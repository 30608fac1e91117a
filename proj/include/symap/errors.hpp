#pragma once

// Error taxonomy shared by the whole library. Every failure mode that callers
// are expected to branch on gets its own type; all derive from symap::Error so
// a single catch suffices at tool boundaries.

#include <cstddef>
#include <stdexcept>
#include <string>

namespace symap {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Expression DSL: malformed input. `offset` is the byte offset of the
// offending token in the source string.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t offset, const std::string& expected)
        : Error("syntax error at byte " + std::to_string(offset) + ": expected " + expected),
          offset(offset), expected(expected) {}
    std::size_t offset;
    std::string expected;
};

class UnknownIdentifier : public Error {
public:
    UnknownIdentifier(std::size_t offset, const std::string& name)
        : Error("unknown identifier '" + name + "' at byte " + std::to_string(offset)),
          offset(offset), name(name) {}
    std::size_t offset;
    std::string name;
};

class ArityError : public Error {
public:
    ArityError(std::size_t offset, const std::string& function, int expected, int got)
        : Error("function '" + function + "' at byte " + std::to_string(offset) + " takes " +
                std::to_string(expected) + " argument(s), got " + std::to_string(got)),
          offset(offset), function(function), expected(expected), got(got) {}
    std::size_t offset;
    std::string function;
    int expected;
    int got;
};

// Evaluation outside the mathematical domain of an operation (log of a
// nonpositive value, sqrt of a negative, division by zero).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Derivative requested at a point where it does not exist (sqrt at 0).
class NonDifferentiable : public Error {
public:
    explicit NonDifferentiable(const std::string& msg) : Error(msg) {}
};

// Implicit solve did not reach tolerance.
class SolveError : public Error {
public:
    SolveError(const std::string& msg, int iterations, double last_residual)
        : Error(msg + " (iterations=" + std::to_string(iterations) +
                ", last residual=" + std::to_string(last_residual) + ")"),
          iterations(iterations), last_residual(last_residual) {}
    int iterations;
    double last_residual;
};

class NotHermitian : public Error {
public:
    explicit NotHermitian(const std::string& msg) : Error(msg) {}
};

// Finite-difference stencil left the region where the metric is defined.
class StepTooLarge : public Error {
public:
    explicit StepTooLarge(const std::string& msg) : Error(msg) {}
};

class TooFewPoints : public Error {
public:
    explicit TooFewPoints(const std::string& msg) : Error(msg) {}
};

class RayExitsDomain : public Error {
public:
    explicit RayExitsDomain(const std::string& msg) : Error(msg) {}
};

// Map construction: a profile radicand g_k (or g_k/(1±S)) is negative.
class NegativeRadicand : public Error {
public:
    explicit NegativeRadicand(const std::string& msg) : Error(msg) {}
};

// Map construction toward the projective target where 1 − S ≤ 0.
class FSDenominator : public Error {
public:
    explicit FSDenominator(const std::string& msg) : Error(msg) {}
};

// Taylor expansion requested for a potential that is not analytic at 0.
class NotAnalyticAtOrigin : public Error {
public:
    explicit NotAnalyticAtOrigin(const std::string& msg) : Error(msg) {}
};

// Series operation that requires a zero constant term received one that isn't.
class NonzeroConstantTerm : public Error {
public:
    explicit NonzeroConstantTerm(const std::string& msg) : Error(msg) {}
};

// Internal consistency check failed (kept rare and loud).
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& msg) : Error(msg) {}
};

} // namespace symap
