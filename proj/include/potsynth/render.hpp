#pragma once

#include "potsynth/geometry.hpp"
#include "potsynth/image.hpp"
#include "potsynth/labels.hpp"
#include "potsynth/mesh.hpp"
#include "potsynth/rng.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace potsynth::render {

/// Camera placement relative to the vessel. Declination is measured from the
/// vertical: 0 looks straight down, 90 is level with the vessel centre.
/// `distance` is a multiple of the distance at which the vessel's bounding
/// sphere exactly fills the field of view.
struct ShotPlan {
    double azimuth = 0.0;      // degrees
    double declination = 90.0;  // degrees
    bool flipped = false;
    double distance = 1.3;
    ViewLabel view_label = ViewLabel::Standard;
};

/// Shots closer than this to the vertical (and upright) count as zenith.
inline constexpr double kZenithToleranceDeg = 22.5;

/// Declination used for the shot taken from below the horizontal.
inline constexpr double kBelowHorizonDeclination = 100.0;

ViewLabel view_label_for(double declination, bool flipped);

/// The photo session: upright shots at azimuth {0,45,90} x declination
/// {0,45,90} plus one at 100 degrees, repeated after turning the vessel 90
/// degrees, then four flipped shots at azimuth 45. With jitter_deg > 0 every
/// angle gets N(0, jitter_deg^2) noise.
std::vector<ShotPlan> shot_plan_catalog(std::uint64_t seed, double jitter_deg = 5.0, double distance = 1.3);

enum class LightKind { Directional, Spot, Point };

std::string_view to_string(LightKind kind);
LightKind parse_light_kind(std::string_view text);

/// `direction` points from the vessel toward the light. Spot and point lights
/// sit at `distance` bounding radii along it; spots aim at the vessel centre.
struct LightSpec {
    LightKind kind = LightKind::Directional;
    Vec3 direction{0.3, -0.4, 0.866};
    double distance = 5.0;
    double intensity = 0.8;
    double ambient = 0.35;
    double spot_half_angle_deg = 30.0;
};

enum class Decoration { None, RimStripes, Leaves, ProceduralNoise };

std::string_view to_string(Decoration d);

struct DecorationSpec {
    Decoration kind = Decoration::None;
    int leaf_count = 0;  // 4 or 6 for Leaves
    bool operator==(const DecorationSpec&) const = default;
};

struct MaterialSpec {
    Rgb base_color{176, 78, 48};
    double specular_strength = 0.0;
    double shininess = 32.0;
    DecorationSpec decoration;
};

/// Training-set decoration policy, with probability one half per image:
/// Dr24-25 rim stripes, Dr35/Dr36 four or six leaves, Dr29/Dr37 noise
/// patterns; every other class stays plain.
DecorationSpec decorate_for_class(std::string_view class_label, Rng& rng);

struct SceneSpec {
    const mesh::VesselMesh* mesh = nullptr;
    ShotPlan shot;
    LightSpec light;
    MaterialSpec material;
    Rgb background{173, 205, 230};
    int width = 512;
    int height = 512;
    std::uint64_t seed = 0;  // procedural decoration fields
    double fov_deg = 40.0;
    double shadow_factor = 0.6;
};

/// Inclusive pixel rectangle.
struct PixelBox {
    int x0 = 0, y0 = 0, x1 = -1, y1 = -1;
    bool empty() const noexcept { return x1 < x0 || y1 < y0; }
    int width() const noexcept { return empty() ? 0 : x1 - x0 + 1; }
    int height() const noexcept { return empty() ? 0 : y1 - y0 + 1; }
};

struct RenderResult {
    RgbImage image;
    PixelBox pot_box;              // pixels covered by vessel geometry
    std::size_t pot_pixels = 0;
    std::vector<std::uint8_t> pot_mask;  // row-major, 1 = vessel
};

/// Deterministic z-buffered rendering. Throws DegenerateScene when no visible
/// triangle remains.
RenderResult rasterize(const SceneSpec& scene);

nlohmann::json to_json(const ShotPlan& s);
nlohmann::json to_json(const LightSpec& l);
nlohmann::json to_json(const MaterialSpec& m);

}  // namespace potsynth::render
