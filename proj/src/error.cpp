#include "ccx/error.hpp"

namespace ccx {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::OrderViolation: return "OrderViolation";
        case ErrorCode::DuplicateCell: return "DuplicateCell";
        case ErrorCode::EmptyCell: return "EmptyCell";
        case ErrorCode::VertexOutOfRange: return "VertexOutOfRange";
        case ErrorCode::InvalidRank: return "InvalidRank";
        case ErrorCode::UnknownCell: return "UnknownCell";
        case ErrorCode::RankOutOfRange: return "RankOutOfRange";
        case ErrorCode::NotOrientable: return "NotOrientable";
        case ErrorCode::NotAPath: return "NotAPath";
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::ChordPresent: return "ChordPresent";
        case ErrorCode::NotACycle: return "NotACycle";
        case ErrorCode::NotTwoDimensional: return "NotTwoDimensional";
        case ErrorCode::StrictContainmentViolation: return "StrictContainmentViolation";
        case ErrorCode::BadWindow: return "BadWindow";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::NotAPartition: return "NotAPartition";
        case ErrorCode::EmptyAugmentation: return "EmptyAugmentation";
        case ErrorCode::DegenerateRow: return "DegenerateRow";
        case ErrorCode::CycleDetected: return "CycleDetected";
        case ErrorCode::UnknownSelector: return "UnknownSelector";
        case ErrorCode::MissingInput: return "MissingInput";
        case ErrorCode::StaleTape: return "StaleTape";
        case ErrorCode::BadParams: return "BadParams";
        case ErrorCode::BadK: return "BadK";
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::NonTriangleFace: return "NonTriangleFace";
        case ErrorCode::DegenerateFace: return "DegenerateFace";
        case ErrorCode::NonManifoldEdge: return "NonManifoldEdge";
        case ErrorCode::TooLarge: return "TooLarge";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

}  // namespace ccx
