#pragma once

#include "potsynth/fracture.hpp"
#include "potsynth/mesh.hpp"
#include "potsynth/profile.hpp"
#include "potsynth/render.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace potsynth::generate {

struct ProfileSource {
    std::string class_label;
    std::filesystem::path path;  // .pbm / .png drawing or .csv curve
    double scale = 1.0;
    std::optional<int> axis_column;
};

struct LabelledProfile {
    std::string class_label;
    profile::ProfileCurve curve;
};

/// Randomisation settings for one synthetic dataset.
struct GenerateConfig {
    std::vector<ProfileSource> profiles;
    int images_per_class = 10;
    int vessels_per_class = 5;
    int width = 512;
    int height = 512;
    int segments = mesh::kDefaultSegments;
    int profile_stride = 1;
    int smooth_window = 1;
    double jitter_sigma = 0.0;  // profile noise, in profile units
    double fracture_probability = 0.7;
    fracture::FractureRanges fracture_ranges;
    double max_removed_fraction = 0.6;
    bool drop_detached_fragments = true;  // keep only the piece that holds together
    std::vector<render::LightKind> lights{render::LightKind::Directional, render::LightKind::Spot,
                                          render::LightKind::Point};
    fracture::RealRange intensity{0.6, 1.0};
    fracture::RealRange ambient{0.3, 0.45};
    fracture::RealRange specular{0.0, 0.0};
    fracture::RealRange light_elevation_deg{30.0, 75.0};
    bool decorations = false;
    double shot_jitter_deg = 5.0;
    fracture::RealRange distance{1.15, 1.5};
    Rgb background{173, 205, 230};
    double background_jitter = 0.10;
    double sieve_max_fraction = 0.95;
    std::optional<std::uint64_t> seed;
};

/// Relative profile paths are resolved against `base_dir`.
GenerateConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
GenerateConfig load_config(const std::filesystem::path& path);

/// Loads drawings (extracting their border) or CSV curves.
std::vector<LabelledProfile> load_profiles(const GenerateConfig& config);

struct ManifestRow {
    std::string image_path;  // relative to the output directory
    std::string class_label;
    std::string vessel_instance;
    ViewLabel view_label = ViewLabel::Standard;
    bool damaged = false;
    std::uint64_t master_seed = 0;
    std::uint64_t image_seed = 0;
    render::PixelBox pot_box;
};

inline constexpr const char* kManifestHeader =
    "image_path,class,vessel_instance,view_label,damaged_flag,master_seed,image_seed,bbox_x0,bbox_y0,bbox_x1,bbox_y1";

/// Machine-readable description of manifest.csv columns.
nlohmann::json manifest_schema();

std::vector<ManifestRow> read_manifest(const std::filesystem::path& path);

/// A fully built vessel instance ready to be photographed.
struct Vessel {
    std::string class_label;
    std::string instance_id;
    mesh::VesselMesh mesh;
    fracture::FracturePlan plan;
    Rgb base_color{};
    bool damaged = false;
};

Vessel build_vessel(const GenerateConfig& config, const std::vector<LabelledProfile>& class_profiles,
                    const std::string& class_label, int vessel_index, std::uint64_t master_seed);

struct RenderedImage {
    RgbImage image;
    ManifestRow row;
    render::SceneSpec scene;
};

/// Randomised scene for image `image_index` of the vessel's class.
RenderedImage render_image(const GenerateConfig& config, const Vessel& vessel, int class_index, int image_index,
                           std::uint64_t master_seed);

struct GenerateSummary {
    std::size_t images = 0;
    std::vector<ManifestRow> rows;
};

/// Writes images/<class>/<class>_<nnnn>.png, manifest.csv and per-vessel
/// fracture plans under `out_dir`, which must be absent or empty. On failure
/// nothing is left behind. Output bytes do not depend on `jobs`.
GenerateSummary generate_dataset(const GenerateConfig& config, std::uint64_t master_seed,
                                 const std::filesystem::path& out_dir, int jobs = 1);

}  // namespace potsynth::generate
