#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace potsynth {

enum class ErrorCode {
    InvalidInput,
    AmbiguousTopology,
    InvalidWindow,
    AxisCrossing,
    DegenerateCurve,
    EmptyMesh,
    InvalidRanges,
    DegenerateScene,
    UnknownClass,
    UnknownForm,
    InsufficientVessels,
    ImageTooSmall,
    NoPotFound,
    EmptyClassInTest,
    MisalignedInputs,
    TooFewSplits,
    NoSolution,
    Io,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a stable machine-readable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace potsynth
