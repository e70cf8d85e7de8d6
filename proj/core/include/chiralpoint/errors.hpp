#ifndef CHIRALPOINT_ERRORS_HPP
#define CHIRALPOINT_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace chiralpoint
{

enum class ErrorCode
{
    // validation family (CLI exit code 2)
    ValidationError,
    UnsupportedUnit,
    MissingDipoleMoment,
    DomainError,
    ParseError,
    SchemaError,
    // numerical family (CLI exit code 3)
    NonPositiveLDOS,
    NoPeak,
    UnresolvedWidth,
    SingularResolvent,
    AliasError,
    StepError,
    SingularAtDetuning,
    DefectiveMatrix,
    NonConvergence,
    IllConditionedFit,
    // environment
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// True for the codes that signal bad user input rather than a numerical failure.
bool is_validation_code(ErrorCode code) noexcept;

class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

} // namespace chiralpoint

#endif
