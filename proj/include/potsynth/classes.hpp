#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace potsynth {

/// The nine aggregated Dragendorff classes, in table order.
inline constexpr std::array<std::string_view, 9> kClassLabels = {
    "Dr18", "Dr24-25", "Dr27", "Dr29", "Dr33", "Dr35", "Dr36", "Dr37", "Dr38",
};

inline constexpr std::size_t kNumClasses = kClassLabels.size();

std::optional<std::size_t> class_index(std::string_view label);

/// Throws UnknownClass when `label` is not one of kClassLabels.
std::size_t require_class_index(std::string_view label);

}  // namespace potsynth
