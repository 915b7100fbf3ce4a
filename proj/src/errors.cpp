#include "kdvlab/errors.hpp"

#include <sstream>

namespace kdvlab {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonPositiveEpsilon: return "NonPositiveEpsilon";
        case ErrorCode::NonPositiveLength: return "NonPositiveLength";
        case ErrorCode::CriticalLength: return "CriticalLength";
        case ErrorCode::SingularProfile: return "SingularProfile";
        case ErrorCode::GridTooCoarse: return "GridTooCoarse";
        case ErrorCode::SolveFailure: return "SolveFailure";
        case ErrorCode::ZeroB: return "ZeroB";
        case ErrorCode::NonNegativeB: return "NonNegativeB";
        case ErrorCode::DenseSnapshotsRequired: return "DenseSnapshotsRequired";
        case ErrorCode::NonPositiveValues: return "NonPositiveValues";
        case ErrorCode::DimensionCap: return "DimensionCap";
        case ErrorCode::EigenFailure: return "EigenFailure";
        case ErrorCode::ZeroLambda: return "ZeroLambda";
        case ErrorCode::PredicateViolated: return "PredicateViolated";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::VerificationFailed: return "VerificationFailed";
    }
    return "Unknown";
}

DomainError::DomainError(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

DomainError DomainError::critical(const CriticalLength& nearest, double L) {
    std::ostringstream os;
    os.precision(17);
    os << "L = " << L << " is critical (nearest " << nearest.value << " from (k,l) = ("
       << nearest.k << "," << nearest.l << "))";
    DomainError err(ErrorCode::CriticalLength, os.str());
    err.nearest_ = nearest;
    return err;
}

}  // namespace kdvlab
