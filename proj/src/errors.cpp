#include "nifront/errors.hpp"

namespace nifront {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegenerateRatio: return "DegenerateRatio";
    case ErrorKind::DegenerateVariance: return "DegenerateVariance";
    case ErrorKind::InfeasibleDesign: return "InfeasibleDesign";
    case ErrorKind::UndefinedRatio: return "UndefinedRatio";
    case ErrorKind::InconsistentDirection: return "InconsistentDirection";
    case ErrorKind::UncoveredLookup: return "UncoveredLookup";
    case ErrorKind::UncontrollableCell: return "UncontrollableCell";
    case ErrorKind::TooLargeToEnumerate: return "TooLargeToEnumerate";
    }
    return "Unknown";
}

}  // namespace nifront
