#pragma once

#include "potsynth/image.hpp"

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace potsynth::profile {

struct Pixel {
    int row = 0;
    int col = 0;
    auto operator<=>(const Pixel&) const = default;
};

/// Border pixels in row-major order, each listed once.
using BorderSet = std::vector<Pixel>;

struct OrderedBorder {
    std::vector<Pixel> pixels;
    bool closed = false;  // last pixel is 8-adjacent to the first
};

struct ProfilePoint {
    double radius = 0.0;
    double height = 0.0;
    bool operator==(const ProfilePoint&) const = default;
};

/// Axial half-section of a vessel, in physical units.
struct ProfileCurve {
    std::vector<ProfilePoint> points;
    double scale = 1.0;   // physical units per drawing pixel
    bool closed = false;  // the last point connects back to the first

    bool operator==(const ProfileCurve&) const = default;
};

/// Pixels whose value differs from the pixel above or to the left. Neighbours
/// outside the bitmap count as equal, so they never contribute.
BorderSet detect_border(const Bitmap& bitmap);

/// Greedy nearest-neighbour chain under 8-connectivity, starting at the
/// topmost-then-leftmost pixel. Throws AmbiguousTopology on multiple components,
/// junctions or dead ends.
OrderedBorder order_border(const BorderSet& border);

/// radius = (col - axis_column) * scale, height = (bitmap_height - row) * scale.
ProfileCurve to_axial_section(std::span<const Pixel> ordered, double scale, int axis_column, int bitmap_height,
                              bool closed = false);

/// Centered moving average. Open curves shrink the window symmetrically near
/// the ends; closed curves wrap around.
ProfileCurve smooth_profile(const ProfileCurve& curve, int window);

/// Independent N(0, sigma^2) offsets on radius and height; radius clamped at 0.
ProfileCurve jitter_profile(const ProfileCurve& curve, double sigma, std::uint64_t seed);

/// Throws InvalidInput unless the curve has >= 3 points, distinct consecutive
/// points and non-negative radii.
void validate(const ProfileCurve& curve);

/// Keep every `stride`-th point (stride >= 1).
ProfileCurve decimate(const ProfileCurve& curve, int stride);

struct ExtractOptions {
    double scale = 1.0;
    std::optional<int> axis_column;  // defaults to the leftmost border column
    int smooth_window = 1;
};

/// detect_border -> order_border -> to_axial_section -> smooth_profile.
ProfileCurve extract_profile(const Bitmap& bitmap, const ExtractOptions& options = {});

// CSV with header `radius,height`. Closed curves repeat their first point as
// the final row.
void write_csv(const ProfileCurve& curve, const std::filesystem::path& path);
ProfileCurve read_csv(const std::filesystem::path& path, double scale = 1.0);

namespace serial {
BorderSet detect_border(const Bitmap& bitmap);
}

}  // namespace potsynth::profile
