#include "frx/error.hpp"

namespace frx {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kOutOfRange: return "OutOfRange";
    case ErrorKind::kCapExceeded: return "CapExceeded";
    case ErrorKind::kNoClosedForm: return "NoClosedForm";
    case ErrorKind::kConditionUnverified: return "ConditionUnverified";
    case ErrorKind::kRuleInapplicable: return "RuleInapplicable";
    case ErrorKind::kOverlapDetected: return "OverlapDetected";
    case ErrorKind::kInfeasible: return "Infeasible";
    case ErrorKind::kIndexSetFinite: return "IndexSetFinite";
    case ErrorKind::kWrongDimension: return "WrongDimension";
    case ErrorKind::kInvalidExpression: return "InvalidExpression";
    case ErrorKind::kParse: return "ParseError";
    case ErrorKind::kUndecidable: return "Undecidable";
    case ErrorKind::kNotRepresentable: return "NotRepresentable";
  }
  return "Error";
}

}  // namespace frx
