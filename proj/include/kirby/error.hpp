#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kirby {

enum class ErrorCode {
    DegenerateFraction,
    InvalidFraction,
    InvalidParameter,
    IndexError,
    SingularBlock,
    EmptyInput,
    MissingEdge,
    MissingVertex,
    NotMinusOne,
    UnsupportedConfiguration,
    NotLinear,
    UnknownLabel,
    NotCancelling,
    NotBlowdownable,
    ChainMismatch,
    WindingObstruction,
    UnknownPiece,
    InvalidCoupling,
    SyntaxError,
    UnknownMove,
    ArityError,
    MoveRejected,
    ExpectationFailed,
    MalformedPath,
    StepOutOfRange,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// Every failure in the engine is reported through this one exception type;
/// `code()` identifies the precondition that was violated.
class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message)
        , code_(code)
        , detail_(message)
    {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace kirby
