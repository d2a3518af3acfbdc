#include "potsynth/error.hpp"

namespace potsynth {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::AmbiguousTopology: return "AmbiguousTopology";
        case ErrorCode::InvalidWindow: return "InvalidWindow";
        case ErrorCode::AxisCrossing: return "AxisCrossing";
        case ErrorCode::DegenerateCurve: return "DegenerateCurve";
        case ErrorCode::EmptyMesh: return "EmptyMesh";
        case ErrorCode::InvalidRanges: return "InvalidRanges";
        case ErrorCode::DegenerateScene: return "DegenerateScene";
        case ErrorCode::UnknownClass: return "UnknownClass";
        case ErrorCode::UnknownForm: return "UnknownForm";
        case ErrorCode::InsufficientVessels: return "InsufficientVessels";
        case ErrorCode::ImageTooSmall: return "ImageTooSmall";
        case ErrorCode::NoPotFound: return "NoPotFound";
        case ErrorCode::EmptyClassInTest: return "EmptyClassInTest";
        case ErrorCode::MisalignedInputs: return "MisalignedInputs";
        case ErrorCode::TooFewSplits: return "TooFewSplits";
        case ErrorCode::NoSolution: return "NoSolution";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace potsynth
