#pragma once

#include <stdexcept>
#include <string>

namespace toral {

// Every failure mode in the library is loud: a typed exception carrying a
// human-readable diagnosis. Callers that want a verdict instead of an
// exception (the CLI, the verifiers) catch these at the boundary.

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegreeTooLarge : Error {
    explicit DegreeTooLarge(const std::string& msg) : Error(msg) {}
};

struct NoConvergence : Error {
    explicit NoConvergence(const std::string& msg) : Error(msg) {}
};

struct AmbiguousGrouping : Error {
    explicit AmbiguousGrouping(const std::string& msg) : Error(msg) {}
};

struct IllConditioned : Error {
    explicit IllConditioned(const std::string& msg) : Error(msg) {}
};

struct PreconditionViolated : Error {
    explicit PreconditionViolated(const std::string& msg) : Error(msg) {}
};

struct DegenerateProjection : Error {
    explicit DegenerateProjection(const std::string& msg) : Error(msg) {}
};

struct HypothesisViolated : Error {
    explicit HypothesisViolated(const std::string& msg) : Error(msg) {}
};

struct TargetsOutOfRange : Error {
    explicit TargetsOutOfRange(const std::string& msg) : Error(msg) {}
};

struct SearchExhausted : Error {
    explicit SearchExhausted(const std::string& msg) : Error(msg) {}
};

struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string& msg) : Error(msg) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

struct NotAnAutomorphism : Error {
    explicit NotAnAutomorphism(const std::string& msg) : Error(msg) {}
};

} // namespace toral
