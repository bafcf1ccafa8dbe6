#include "kirby/error.hpp"

namespace kirby {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
        case ErrorCode::DegenerateFraction: return "DegenerateFraction";
        case ErrorCode::InvalidFraction: return "InvalidFraction";
        case ErrorCode::InvalidParameter: return "InvalidParameter";
        case ErrorCode::IndexError: return "IndexError";
        case ErrorCode::SingularBlock: return "SingularBlock";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::MissingEdge: return "MissingEdge";
        case ErrorCode::MissingVertex: return "MissingVertex";
        case ErrorCode::NotMinusOne: return "NotMinusOne";
        case ErrorCode::UnsupportedConfiguration: return "UnsupportedConfiguration";
        case ErrorCode::NotLinear: return "NotLinear";
        case ErrorCode::UnknownLabel: return "UnknownLabel";
        case ErrorCode::NotCancelling: return "NotCancelling";
        case ErrorCode::NotBlowdownable: return "NotBlowdownable";
        case ErrorCode::ChainMismatch: return "ChainMismatch";
        case ErrorCode::WindingObstruction: return "WindingObstruction";
        case ErrorCode::UnknownPiece: return "UnknownPiece";
        case ErrorCode::InvalidCoupling: return "InvalidCoupling";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::UnknownMove: return "UnknownMove";
        case ErrorCode::ArityError: return "ArityError";
        case ErrorCode::MoveRejected: return "MoveRejected";
        case ErrorCode::ExpectationFailed: return "ExpectationFailed";
        case ErrorCode::MalformedPath: return "MalformedPath";
        case ErrorCode::StepOutOfRange: return "StepOutOfRange";
    }
    return "Unknown";
}

}  // namespace kirby
