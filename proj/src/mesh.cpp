#include "potsynth/mesh.hpp"

#include "potsynth/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

namespace potsynth::mesh {

std::size_t VesselMesh::removed_count() const {
    return static_cast<std::size_t>(std::count(removed.begin(), removed.end(), std::uint8_t{1}));
}

namespace {

// Signed area of the profile polygon (closed implicitly) in the (r, h) plane.
double signed_area(const std::vector<profile::ProfilePoint>& pts) {
    double a = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const auto& p = pts[k];
        const auto& q = pts[(k + 1) % pts.size()];
        a += p.radius * q.height - q.radius * p.height;
    }
    return 0.5 * a;
}

}  // namespace

VesselMesh revolve(const profile::ProfileCurve& curve, int segments) {
    if (segments < 3) throw Error(ErrorCode::InvalidInput, "revolve needs at least 3 segments");
    if (curve.points.empty()) throw Error(ErrorCode::DegenerateCurve, "profile has no points");
    if (std::all_of(curve.points.begin(), curve.points.end(), [](const auto& p) { return p.radius == 0.0; }))
        throw Error(ErrorCode::DegenerateCurve, "every profile point lies on the axis");

    VesselMesh mesh;
    mesh.segments = segments;
    const std::size_t np = curve.points.size();
    std::vector<double> cosines(static_cast<std::size_t>(segments)), sines(static_cast<std::size_t>(segments));
    for (int s = 0; s < segments; ++s) {
        const double a = 2.0 * kPi * s / segments;
        cosines[static_cast<std::size_t>(s)] = std::cos(a);
        sines[static_cast<std::size_t>(s)] = std::sin(a);
    }

    // first[p] = index of vertex (p, 0); poles own a single vertex.
    std::vector<std::uint32_t> first(np);
    for (std::size_t p = 0; p < np; ++p) {
        const auto& pt = curve.points[p];
        if (pt.radius < 0.0) throw Error(ErrorCode::InvalidInput, "negative radius in profile");
        first[p] = static_cast<std::uint32_t>(mesh.vertices.size());
        if (pt.radius == 0.0) {
            mesh.vertices.push_back({0.0, 0.0, pt.height});
            mesh.ring_of.push_back({static_cast<int>(p), 0});
            continue;
        }
        for (int s = 0; s < segments; ++s) {
            mesh.vertices.push_back(
                {pt.radius * cosines[static_cast<std::size_t>(s)], pt.radius * sines[static_cast<std::size_t>(s)], pt.height});
            mesh.ring_of.push_back({static_cast<int>(p), s});
        }
    }
    mesh.removed.assign(mesh.vertices.size(), 0);

    auto vertex = [&](std::size_t p, int s) -> std::uint32_t {
        if (curve.points[p].radius == 0.0) return first[p];
        return first[p] + static_cast<std::uint32_t>(s % segments);
    };
    const bool outward_left = signed_area(curve.points) < 0.0;
    auto emit = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
        if (a == b || b == c || a == c) return;
        if (outward_left) std::swap(b, c);
        mesh.triangles.push_back({a, b, c});
    };

    const std::size_t strips = curve.closed ? np : np - 1;
    for (std::size_t p = 0; p < strips; ++p) {
        const std::size_t q = (p + 1) % np;
        for (int s = 0; s < segments; ++s) {
            const auto a = vertex(p, s), b = vertex(p, s + 1), c = vertex(q, s + 1), d = vertex(q, s);
            emit(a, b, c);
            emit(a, c, d);
        }
    }
    return mesh;
}

Box3 mesh_bbox(const VesselMesh& mesh) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    Box3 box{{inf, inf, inf}, {-inf, -inf, -inf}};
    bool any = false;
    for (std::size_t k = 0; k < mesh.vertices.size(); ++k) {
        if (mesh.removed[k]) continue;
        const Vec3& v = mesh.vertices[k];
        box.lo = {std::min(box.lo.x, v.x), std::min(box.lo.y, v.y), std::min(box.lo.z, v.z)};
        box.hi = {std::max(box.hi.x, v.x), std::max(box.hi.y, v.y), std::max(box.hi.z, v.z)};
        any = true;
    }
    if (!any) throw Error(ErrorCode::EmptyMesh, "every mesh vertex has been removed");
    return box;
}

void write_obj(const VesselMesh& mesh, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << std::setprecision(10);
    std::vector<std::uint32_t> renumber(mesh.vertices.size(), 0);
    std::uint32_t next = 1;
    for (std::size_t k = 0; k < mesh.vertices.size(); ++k) {
        if (mesh.removed[k]) continue;
        renumber[k] = next++;
        const Vec3& v = mesh.vertices[k];
        out << "v " << v.x << ' ' << v.y << ' ' << v.z << '\n';
    }
    for (const auto& t : mesh.triangles)
        if (mesh.visible(t)) out << "f " << renumber[t[0]] << ' ' << renumber[t[1]] << ' ' << renumber[t[2]] << '\n';
}

}  // namespace potsynth::mesh
