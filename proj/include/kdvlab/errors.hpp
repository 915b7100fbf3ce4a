#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kdvlab {

/// Domain error kinds. The CLI reports the name and exits with code 1.
enum class ErrorCode {
    NonPositiveEpsilon,
    NonPositiveLength,
    CriticalLength,
    SingularProfile,
    GridTooCoarse,
    SolveFailure,
    ZeroB,
    NonNegativeB,
    DenseSnapshotsRequired,
    NonPositiveValues,
    DimensionCap,
    EigenFailure,
    ZeroLambda,
    PredicateViolated,
    InvalidConfig,
    VerificationFailed,
};

std::string_view to_string(ErrorCode code);

/// Member of the critical set: value = 2π·sqrt((k² + k·l + l²)/3), k ≤ l.
struct CriticalLength {
    double value = 0.0;
    int k = 0;
    int l = 0;

    friend bool operator==(const CriticalLength&, const CriticalLength&) = default;
};

class DomainError : public std::runtime_error {
public:
    DomainError(ErrorCode code, const std::string& detail);

    ErrorCode code() const noexcept { return code_; }

    /// Populated for ErrorCode::CriticalLength.
    const std::optional<CriticalLength>& nearest_critical() const noexcept { return nearest_; }

    static DomainError critical(const CriticalLength& nearest, double L);

private:
    ErrorCode code_;
    std::optional<CriticalLength> nearest_;
};

}  // namespace kdvlab
