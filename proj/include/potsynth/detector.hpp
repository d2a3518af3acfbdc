#pragma once

#include "potsynth/image.hpp"

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include <json.hpp>

namespace potsynth::detect {

inline constexpr int kGrid = 30;
inline constexpr double kEps = 0.1;
inline constexpr int kMinPts = 5;
inline constexpr std::size_t kMinClusterSize = 25;
inline constexpr double kCropGrowth = 1.5;

/// (saturation, value, pos_x, pos_y)
using FeatureRow = std::array<double, 4>;

struct PixelFeatures {
    std::vector<FeatureRow> rows;  // row-major over the grid
};

struct ClusterAssignment {
    static constexpr int kNoise = -1;
    std::vector<int> labels;          // per point: cluster id or kNoise
    std::vector<std::size_t> sizes;   // per cluster id
    std::size_t cluster_count() const noexcept { return sizes.size(); }
};

struct CropBox {
    double center_x = 0.0;  // original-image pixels
    double center_y = 0.0;
    int side = 0;           // requested square side
    int x0 = 0, y0 = 0;     // extracted window after clamping
    int width = 0, height = 0;
};

struct Detection {
    RgbImage crop;
    CropBox box;
    int cluster_id = 0;
    std::size_t cluster_size = 0;
    std::size_t cluster_count = 0;
};

/// Area-average resampling: each output pixel is the mean of the source
/// rectangle it covers, with fractional pixels weighted by overlap.
RgbImage downscale(const RgbImage& image, int out_width, int out_height);

/// 30x30 area-average; throws ImageTooSmall below 30x30.
RgbImage downscale_30(const RgbImage& image);

/// Hexcone saturation and value plus pixel-centre positions, each feature
/// min-max normalised over the image (constant features map to 0).
PixelFeatures features(const RgbImage& image30);

/// DBSCAN with Euclidean distance; neighbourhoods include the point itself
/// and use distance <= eps. Clusters are numbered in scan order and border
/// points join the first cluster that reaches them.
ClusterAssignment dbscan(std::span<const FeatureRow> points, double eps = kEps, int min_pts = kMinPts);

/// Among clusters with >= min_size members, the one whose members have the
/// smallest mean squared distance of (pos_x, pos_y) to (0.5, 0.5); ties go to
/// the lowest id. Throws NoPotFound if none survives.
int select_pot_cluster(const ClusterAssignment& assignment, const PixelFeatures& feats,
                       std::size_t min_size = kMinClusterSize);

/// Square crop of side 2*floor(1.5*max(Lx, Ly)/2) centred on the cluster mean,
/// shifted inside the image (truncated only if larger than the image).
Detection crop_from_cluster(const RgbImage& image, const ClusterAssignment& assignment, int pot_id, int grid = kGrid);

Detection detect_and_crop(const RgbImage& image);

nlohmann::json sidecar_json(const Detection& d);

struct BatchSummary {
    std::size_t processed = 0;
    std::size_t failed = 0;
};

/// Crops every PNG under `input_dir` into the mirrored path under
/// `output_dir` with a .json sidecar. Images without a pot get a sidecar
/// carrying the error instead of a crop.
BatchSummary detect_directory(const std::filesystem::path& input_dir, const std::filesystem::path& output_dir,
                              int jobs = 1);

namespace serial {
ClusterAssignment dbscan(std::span<const FeatureRow> points, double eps = kEps, int min_pts = kMinPts);
}

}  // namespace potsynth::detect
