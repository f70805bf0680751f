#pragma once

#include <stdexcept>
#include <string>

namespace ccx {

enum class ErrorCode {
    OrderViolation,
    DuplicateCell,
    EmptyCell,
    VertexOutOfRange,
    InvalidRank,
    UnknownCell,
    RankOutOfRange,
    NotOrientable,
    NotAPath,
    TooShort,
    ChordPresent,
    NotACycle,
    NotTwoDimensional,
    StrictContainmentViolation,
    BadWindow,
    ShapeMismatch,
    NotAPartition,
    EmptyAugmentation,
    DegenerateRow,
    CycleDetected,
    UnknownSelector,
    MissingInput,
    StaleTape,
    BadParams,
    BadK,
    SelfLoop,
    ParseError,
    NonTriangleFace,
    DegenerateFace,
    NonManifoldEdge,
    TooLarge,
};

const char* error_code_name(ErrorCode code);

// Validation failure raised by every module. Callers that only care about
// the category can switch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace ccx
