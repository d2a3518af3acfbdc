#pragma once

#include "potsynth/geometry.hpp"
#include "potsynth/profile.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace potsynth::mesh {

inline constexpr int kDefaultSegments = 128;

/// Where a vertex came from: profile point index and angular segment.
/// Pole vertices (radius 0) use segment 0.
struct RingRef {
    int profile_index = 0;
    int segment = 0;
};

using Triangle = std::array<std::uint32_t, 3>;

struct VesselMesh {
    std::vector<Vec3> vertices;
    std::vector<Triangle> triangles;
    int segments = 0;
    std::vector<RingRef> ring_of;
    std::vector<std::uint8_t> removed;  // 1 = erased by a fracture

    std::size_t size() const noexcept { return vertices.size(); }
    std::size_t removed_count() const;

    /// True when the triangle touches no removed vertex.
    bool visible(const Triangle& t) const { return !removed[t[0]] && !removed[t[1]] && !removed[t[2]]; }
};

/// Surface of revolution about the z axis. Vertex (p, s) sits at
/// (r_p cos(2 pi s / segments), r_p sin(2 pi s / segments), h_p); zero-radius
/// points collapse to a single axis vertex. Triangles wind counter-clockwise
/// seen from outside the material the profile encloses.
VesselMesh revolve(const profile::ProfileCurve& curve, int segments = kDefaultSegments);

/// Bounds over non-removed vertices. Throws EmptyMesh when none remain.
Box3 mesh_bbox(const VesselMesh& mesh);

/// ASCII OBJ of the visible part of the mesh.
void write_obj(const VesselMesh& mesh, const std::filesystem::path& path);

}  // namespace potsynth::mesh
