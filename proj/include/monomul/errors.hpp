#pragma once

#include <stdexcept>
#include <string>

namespace monomul {

// Failure classes surfaced by the library. InvalidInput covers malformed
// arguments and files (CLI exit code 2); everything else is a numerical or
// domain failure discovered during computation (CLI exit code 3).
enum class ErrorCode {
    InvalidInput,
    SingularLinearTerm,
    ZeroLinearTerm,
    BadBranch,
    ResonantBranch,
    PoleHit,
    DomainViolation,
    DomainEscape,
    DomainExit,
    RankMismatch,
    TruncationExceeded,
    ZeroFirstMoment,
    RecompositionFailure,
    SchemeDisagreement,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }
    const char* code_name() const { return error_code_name(code_); }

    // True for errors caused by bad input rather than a numerical failure.
    bool is_input_error() const { return code_ == ErrorCode::InvalidInput; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace monomul
