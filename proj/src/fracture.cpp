#include "potsynth/fracture.hpp"

#include "potsynth/error.hpp"
#include "potsynth/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace potsynth::fracture {

void validate(const FractureRanges& r) {
    auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidRanges, "invalid fracture ranges: " + what); };
    if (r.event_count.lo < 0 || r.event_count.lo > r.event_count.hi) bad("event_count");
    if (r.rescue_count.lo < 0 || r.rescue_count.lo > r.rescue_count.hi) bad("rescue_count");
    if (!(r.radius_fraction.lo > 0.0) || r.radius_fraction.lo > r.radius_fraction.hi) bad("radius_fraction");
    if (!(r.r_min_factor > 0.0) || r.r_min_factor > r.r_max_factor) bad("r_min_factor/r_max_factor");
    if (!(r.bbox_inflation >= 0.0)) bad("bbox_inflation");
}

FracturePlan sample_fracture_plan(const Box3& bbox, const FractureRanges& ranges, std::uint64_t seed) {
    validate(ranges);
    FracturePlan plan;
    plan.seed = seed;
    plan.ranges = ranges;
    Rng rng(seed);

    const Vec3 grow = bbox.extent() * (0.5 * ranges.bbox_inflation);
    const Vec3 lo = bbox.lo - grow;
    const Vec3 hi = bbox.hi + grow;
    const double diag = bbox.diagonal();

    const long long count = uniform_int(rng, ranges.event_count.lo, ranges.event_count.hi);
    for (long long e = 0; e < count; ++e) {
        FractureEvent ev;
        ev.center = {uniform(rng, lo.x, hi.x), uniform(rng, lo.y, hi.y), uniform(rng, lo.z, hi.z)};
        ev.radius = diag * uniform(rng, ranges.radius_fraction.lo, ranges.radius_fraction.hi);
        if (!(ev.radius > 0.0)) ev.radius = ranges.radius_fraction.lo;  // zero-size bbox
        ev.r_min = ranges.r_min_factor * ev.radius;
        ev.r_max = ranges.r_max_factor * ev.radius;
        const long long n = uniform_int(rng, ranges.rescue_count.lo, ranges.rescue_count.hi);
        const double a3 = ev.r_min * ev.r_min * ev.r_min;
        const double b3 = ev.r_max * ev.r_max * ev.r_max;
        for (long long k = 0; k < n; ++k) {
            // Radius by inverting the shell volume CDF, direction uniform on the sphere.
            const double r = std::cbrt(a3 + uniform01(rng) * (b3 - a3));
            const double z = uniform(rng, -1.0, 1.0);
            const double phi = uniform(rng, 0.0, 2.0 * kPi);
            const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
            const Vec3 dir{s * std::cos(phi), s * std::sin(phi), z};
            ev.rescue_points.push_back(ev.center + dir * std::clamp(r, ev.r_min, ev.r_max));
        }
        plan.events.push_back(std::move(ev));
    }
    return plan;
}

bool removes(const FractureEvent& event, const Vec3& v) {
    const double dp = distance2(v, event.center);
    if (dp > event.radius * event.radius) return false;
    for (const Vec3& q : event.rescue_points)
        if (distance2(v, q) <= dp) return false;
    return true;
}

namespace serial {

void apply_fracture(mesh::VesselMesh& mesh, const FractureEvent& event) {
    for (std::size_t k = 0; k < mesh.vertices.size(); ++k)
        if (!mesh.removed[k] && removes(event, mesh.vertices[k])) mesh.removed[k] = 1;
}

}  // namespace serial

void apply_fracture(mesh::VesselMesh& mesh, const FractureEvent& event) {
    const auto n = static_cast<std::ptrdiff_t>(mesh.vertices.size());
    const Vec3* verts = mesh.vertices.data();
    std::uint8_t* removed = mesh.removed.data();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k)
        if (!removed[k] && removes(event, verts[k])) removed[k] = 1;
}

void apply_plan(mesh::VesselMesh& mesh, const FracturePlan& plan) {
    for (const auto& ev : plan.events) apply_fracture(mesh, ev);
}

double damaged_azimuth_fraction(const mesh::VesselMesh& mesh) {
    if (mesh.segments <= 0) return 0.0;
    std::vector<std::uint8_t> hit(static_cast<std::size_t>(mesh.segments), 0);
    bool pole_hit = false;
    for (std::size_t k = 0; k < mesh.vertices.size(); ++k) {
        if (!mesh.removed[k]) continue;
        const Vec3& v = mesh.vertices[k];
        if (v.x == 0.0 && v.y == 0.0) {
            pole_hit = true;
            continue;
        }
        hit[static_cast<std::size_t>(mesh.ring_of[k].segment)] = 1;
    }
    const auto segs = static_cast<double>(std::count(hit.begin(), hit.end(), std::uint8_t{1}));
    if (segs == 0.0 && pole_hit) return 1.0 / mesh.segments;
    return segs / mesh.segments;
}

std::size_t drop_detached_fragments(mesh::VesselMesh& mesh) {
    const std::size_t n = mesh.size();
    std::vector<std::uint32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    };
    for (const auto& t : mesh.triangles)
        if (mesh.visible(t)) {
            unite(t[0], t[1]);
            unite(t[1], t[2]);
        }
    std::vector<std::size_t> tris(n, 0);
    for (const auto& t : mesh.triangles)
        if (mesh.visible(t)) ++tris[find(t[0])];
    std::uint32_t keep = 0;
    for (std::uint32_t v = 0; v < n; ++v)
        if (tris[v] > tris[keep]) keep = v;
    std::size_t dropped = 0;
    for (std::uint32_t v = 0; v < n; ++v)
        if (!mesh.removed[v] && (tris[keep] == 0 || find(v) != keep)) {
            mesh.removed[v] = 1;
            ++dropped;
        }
    return dropped;
}

namespace {

nlohmann::json vec_json(const Vec3& v) { return nlohmann::json::array({v.x, v.y, v.z}); }
Vec3 json_vec(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }

}  // namespace

nlohmann::json to_json(const FracturePlan& plan) {
    nlohmann::json j;
    j["seed"] = plan.seed;
    const auto& r = plan.ranges;
    j["ranges"] = {
        {"event_count", {r.event_count.lo, r.event_count.hi}},
        {"radius_fraction", {r.radius_fraction.lo, r.radius_fraction.hi}},
        {"rescue_count", {r.rescue_count.lo, r.rescue_count.hi}},
        {"r_min_factor", r.r_min_factor},
        {"r_max_factor", r.r_max_factor},
        {"bbox_inflation", r.bbox_inflation},
    };
    j["events"] = nlohmann::json::array();
    for (const auto& ev : plan.events) {
        nlohmann::json e;
        e["center"] = vec_json(ev.center);
        e["radius"] = ev.radius;
        e["r_min"] = ev.r_min;
        e["r_max"] = ev.r_max;
        e["rescue_points"] = nlohmann::json::array();
        for (const auto& q : ev.rescue_points) e["rescue_points"].push_back(vec_json(q));
        j["events"].push_back(std::move(e));
    }
    return j;
}

FracturePlan plan_from_json(const nlohmann::json& j) {
    try {
        FracturePlan plan;
        plan.seed = j.value("seed", std::uint64_t{0});
        if (j.contains("ranges")) {
            const auto& r = j.at("ranges");
            auto& out = plan.ranges;
            if (r.contains("event_count")) out.event_count = {r["event_count"][0], r["event_count"][1]};
            if (r.contains("radius_fraction")) out.radius_fraction = {r["radius_fraction"][0], r["radius_fraction"][1]};
            if (r.contains("rescue_count")) out.rescue_count = {r["rescue_count"][0], r["rescue_count"][1]};
            out.r_min_factor = r.value("r_min_factor", out.r_min_factor);
            out.r_max_factor = r.value("r_max_factor", out.r_max_factor);
            out.bbox_inflation = r.value("bbox_inflation", out.bbox_inflation);
        }
        for (const auto& e : j.at("events")) {
            FractureEvent ev;
            ev.center = json_vec(e.at("center"));
            ev.radius = e.at("radius").get<double>();
            ev.r_min = e.value("r_min", 0.0);
            ev.r_max = e.value("r_max", 0.0);
            for (const auto& q : e.at("rescue_points")) ev.rescue_points.push_back(json_vec(q));
            if (!(ev.radius > 0.0)) throw Error(ErrorCode::InvalidInput, "fracture event radius must be positive");
            plan.events.push_back(std::move(ev));
        }
        return plan;
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::InvalidInput, std::string("malformed fracture plan: ") + ex.what());
    }
}

}  // namespace potsynth::fracture
