#pragma once

#include "potsynth/geometry.hpp"
#include "potsynth/mesh.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

#include <json.hpp>

namespace potsynth::fracture {

/// One break: vertices within `radius` of `center` are erased unless some
/// rescue point is at least as close to them as the center is.
struct FractureEvent {
    Vec3 center;
    double radius = 0.0;
    std::vector<Vec3> rescue_points;
    double r_min = 0.0;
    double r_max = 0.0;
};

struct IntRange {
    long long lo = 0;
    long long hi = 0;
};

struct RealRange {
    double lo = 0.0;
    double hi = 0.0;
};

/// Sampling ranges. Sphere radii are fractions of the bbox diagonal; the
/// rescue shell is expressed as multiples of the sampled sphere radius.
struct FractureRanges {
    IntRange event_count{1, 4};
    RealRange radius_fraction{0.15, 0.45};
    IntRange rescue_count{2, 6};
    double r_min_factor = 0.5;
    double r_max_factor = 1.5;
    double bbox_inflation = 0.2;  // total growth of each bbox extent
};

struct FracturePlan {
    std::vector<FractureEvent> events;
    std::uint64_t seed = 0;
    FractureRanges ranges;
};

/// Throws InvalidRanges for negative values or lo > hi.
void validate(const FractureRanges& ranges);

FracturePlan sample_fracture_plan(const Box3& bbox, const FractureRanges& ranges, std::uint64_t seed);

/// The removal predicate for a single vertex.
bool removes(const FractureEvent& event, const Vec3& v);

/// Marks newly removed vertices; already removed vertices stay removed.
void apply_fracture(mesh::VesselMesh& mesh, const FractureEvent& event);

void apply_plan(mesh::VesselMesh& mesh, const FracturePlan& plan);

/// Share of angular segments in which at least one vertex was removed.
double damaged_azimuth_fraction(const mesh::VesselMesh& mesh);

/// Keep only the largest piece of the visible surface (by triangle count;
/// ties to the piece holding the lowest vertex index). Vertices outside it
/// are marked removed. Returns the number of newly removed vertices.
std::size_t drop_detached_fragments(mesh::VesselMesh& mesh);

nlohmann::json to_json(const FracturePlan& plan);
FracturePlan plan_from_json(const nlohmann::json& j);

namespace serial {
void apply_fracture(mesh::VesselMesh& mesh, const FractureEvent& event);
}

}  // namespace potsynth::fracture
