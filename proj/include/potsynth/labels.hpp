#pragma once

#include <optional>
#include <string_view>

namespace potsynth {

/// Photograph viewpoint labels.
enum class ViewLabel { Standard, Zenith, Flipped };

std::string_view to_string(ViewLabel label);
std::optional<ViewLabel> parse_view_label(std::string_view text);

}  // namespace potsynth
