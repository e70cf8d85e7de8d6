#include "chiralpoint/errors.hpp"

namespace chiralpoint
{

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::UnsupportedUnit: return "UnsupportedUnit";
    case ErrorCode::MissingDipoleMoment: return "MissingDipoleMoment";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::NonPositiveLDOS: return "NonPositiveLDOS";
    case ErrorCode::NoPeak: return "NoPeak";
    case ErrorCode::UnresolvedWidth: return "UnresolvedWidth";
    case ErrorCode::SingularResolvent: return "SingularResolvent";
    case ErrorCode::AliasError: return "AliasError";
    case ErrorCode::StepError: return "StepError";
    case ErrorCode::SingularAtDetuning: return "SingularAtDetuning";
    case ErrorCode::DefectiveMatrix: return "DefectiveMatrix";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::IllConditionedFit: return "IllConditionedFit";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

bool is_validation_code(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::ValidationError:
    case ErrorCode::UnsupportedUnit:
    case ErrorCode::MissingDipoleMoment:
    case ErrorCode::DomainError:
    case ErrorCode::ParseError:
    case ErrorCode::SchemaError:
        return true;
    default:
        return false;
    }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
{
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

} // namespace chiralpoint
