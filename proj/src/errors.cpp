#include "monomul/errors.hpp"

namespace monomul {

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::SingularLinearTerm: return "SingularLinearTerm";
    case ErrorCode::ZeroLinearTerm: return "ZeroLinearTerm";
    case ErrorCode::BadBranch: return "BadBranch";
    case ErrorCode::ResonantBranch: return "ResonantBranch";
    case ErrorCode::PoleHit: return "PoleHit";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::DomainEscape: return "DomainEscape";
    case ErrorCode::DomainExit: return "DomainExit";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::TruncationExceeded: return "TruncationExceeded";
    case ErrorCode::ZeroFirstMoment: return "ZeroFirstMoment";
    case ErrorCode::RecompositionFailure: return "RecompositionFailure";
    case ErrorCode::SchemeDisagreement: return "SchemeDisagreement";
    }
    return "Unknown";
}

} // namespace monomul
