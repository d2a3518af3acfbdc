#include "potsynth/labels.hpp"

namespace potsynth {

std::string_view to_string(ViewLabel label) {
    switch (label) {
        case ViewLabel::Standard: return "standard";
        case ViewLabel::Zenith: return "zenith";
        case ViewLabel::Flipped: return "flipped";
    }
    return "standard";
}

std::optional<ViewLabel> parse_view_label(std::string_view text) {
    if (text == "standard") return ViewLabel::Standard;
    if (text == "zenith") return ViewLabel::Zenith;
    if (text == "flipped") return ViewLabel::Flipped;
    return std::nullopt;
}

}  // namespace potsynth
