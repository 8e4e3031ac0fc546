#pragma once

#include <stdexcept>
#include <string>

namespace silt {

// Machine-readable error codes. The CLI maps these to exit codes:
//   validation-type errors -> 2, budget/window errors -> 3,
//   internal certificate failures -> 4.
enum class ErrorCode {
    InfiniteDimensional,
    BadRelation,
    UnknownVertex,
    AlgebraMismatch,
    ResolutionCapExceeded,
    DegreeNotOne,
    CapTooSmall,
    InfiniteProjDim,
    WindowExhausted,
    NoProjectives,
    MembershipViolation,
    NoFiniteBound,
    NotGood,
    NotSubcat,
    NoReferenceSilting,
    ZeroExtension,
    HypothesisFailed,
    NotFound,
    BudgetExceeded,
    ApproximationFailure,
    NonTermination,
    ParseError,
    ValidationError,
    InternalError,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

// Internal consistency check: used where the mathematics guarantees a
// property and a violation means a bug, not bad input.
inline void internal_check(bool ok, const std::string& message) {
    if (!ok) fail(ErrorCode::InternalError, message);
}

} // namespace silt
