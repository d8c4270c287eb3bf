#include "gfl/error.hpp"

namespace gfl {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OddDegreePresent: return "OddDegreePresent";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::WrongOddCount: return "WrongOddCount";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::VertexOutOfRange: return "VertexOutOfRange";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteDerivative: return "NonFiniteDerivative";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotCoordinateFormat: return "NotCoordinateFormat";
    case ErrorCode::DensityBelowTree: return "DensityBelowTree";
    case ErrorCode::BlobsDontFit: return "BlobsDontFit";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

} // namespace gfl
