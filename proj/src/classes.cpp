#include "potsynth/classes.hpp"

#include "potsynth/error.hpp"

namespace potsynth {

std::optional<std::size_t> class_index(std::string_view label) {
    for (std::size_t i = 0; i < kClassLabels.size(); ++i)
        if (kClassLabels[i] == label) return i;
    return std::nullopt;
}

std::size_t require_class_index(std::string_view label) {
    if (auto idx = class_index(label)) return *idx;
    throw Error(ErrorCode::UnknownClass, "unknown class label '" + std::string(label) + "'");
}

}  // namespace potsynth
