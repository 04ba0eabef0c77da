#include "gravelai/error.hpp"

namespace gravelai {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotATree: return "NotATree";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::DegenerateInstance: return "DegenerateInstance";
        case ErrorCode::TiedMaximum: return "TiedMaximum";
        case ErrorCode::TooManyModes: return "TooManyModes";
        case ErrorCode::NotApplicable: return "NotApplicable";
        case ErrorCode::NotAMode: return "NotAMode";
        case ErrorCode::HypothesisViolated: return "HypothesisViolated";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::NoFeasiblePoint: return "NoFeasiblePoint";
        case ErrorCode::ModesNotRealized: return "ModesNotRealized";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::EmptyInput: return "EmptyInput";
    }
    return "Unknown";
}

}  // namespace gravelai
