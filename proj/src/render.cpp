#include "potsynth/render.hpp"

#include "potsynth/classes.hpp"
#include "potsynth/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace potsynth::render {

namespace {

constexpr double deg2rad(double d) { return d * kPi / 180.0; }

double lattice(long long ix, long long iy, std::uint64_t seed) {
    const std::uint64_t h = mix64(seed ^ mix64(static_cast<std::uint64_t>(ix) * 0x9E3779B97F4A7C15ULL ^
                                                mix64(static_cast<std::uint64_t>(iy) + 0x5851F42D4C957F2DULL)));
    return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
}

// Smoothly interpolated lattice noise in [0,1], periodic in x.
double value_noise(double x, double y, long long period_x, std::uint64_t seed) {
    const double fx = std::floor(x), fy = std::floor(y);
    const auto ix = static_cast<long long>(fx), iy = static_cast<long long>(fy);
    double tx = x - fx, ty = y - fy;
    tx = tx * tx * (3.0 - 2.0 * tx);
    ty = ty * ty * (3.0 - 2.0 * ty);
    auto wrap = [period_x](long long v) { return ((v % period_x) + period_x) % period_x; };
    const double a = lattice(wrap(ix), iy, seed), b = lattice(wrap(ix + 1), iy, seed);
    const double c = lattice(wrap(ix), iy + 1, seed), d = lattice(wrap(ix + 1), iy + 1, seed);
    return (a * (1 - tx) + b * tx) * (1 - ty) + (c * (1 - tx) + d * tx) * ty;
}

// Albedo multiplier from the decoration at height fraction t and azimuth theta.
double decoration_factor(const DecorationSpec& deco, double t, double theta, std::uint64_t seed) {
    switch (deco.kind) {
        case Decoration::None: return 1.0;
        case Decoration::RimStripes: {
            if (t < 0.85) return 1.0;
            const int band = static_cast<int>(std::floor((t - 0.85) / 0.15 * 5.0));
            return band % 2 == 0 ? 0.45 : 1.0;
        }
        case Decoration::Leaves: {
            if (t < 0.78 || deco.leaf_count <= 0) return 1.0;
            const double u = std::min(1.0, (t - 0.78) / 0.22);
            double turns = (theta + kPi) / (2.0 * kPi) * deco.leaf_count;
            const double frac = turns - std::floor(turns);
            const double half_width = 0.42 * std::sin(kPi * u);
            return std::abs(frac - 0.5) < half_width ? 0.5 : 1.0;
        }
        case Decoration::ProceduralNoise: {
            const double u = (theta + kPi) / (2.0 * kPi);
            const double coarse = value_noise(u * 8.0, t * 6.0, 8, seed ^ 0xA5A5A5A5ULL);
            const double fine = value_noise(u * 24.0, t * 18.0, 24, seed ^ 0x5A5A5A5AULL);
            return 0.6 + 0.35 * coarse + 0.25 * (fine - 0.5);
        }
    }
    return 1.0;
}

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0)); }

struct Camera {
    Vec3 eye, forward, right, up;
    double focal = 1.0;
    double cx = 0.0, cy = 0.0;

    // Returns false behind the eye.
    bool project(const Vec3& w, double& sx, double& sy, double& depth) const {
        const Vec3 c = w - eye;
        depth = dot(c, forward);
        if (depth <= 1e-9) return false;
        sx = cx + focal * dot(c, right) / depth;
        sy = cy - focal * dot(c, up) / depth;
        return true;
    }

    Vec3 ray(double sx, double sy) const {
        return normalized(forward + right * ((sx - cx) / focal) + up * ((cy - sy) / focal));
    }
};

struct ScreenVertex {
    double x = 0.0, y = 0.0, inv_depth = 0.0;
    bool valid = false;
};

// Calls fn(px, py, w0, w1, w2) for every pixel centre inside the triangle.
template <class Fn>
void scan_triangle(const ScreenVertex& a, const ScreenVertex& b, const ScreenVertex& c, int width, int height, Fn&& fn) {
    const double area = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    if (std::abs(area) < 1e-12) return;
    const int x0 = std::max(0, static_cast<int>(std::floor(std::min({a.x, b.x, c.x}))));
    const int x1 = std::min(width - 1, static_cast<int>(std::ceil(std::max({a.x, b.x, c.x}))));
    const int y0 = std::max(0, static_cast<int>(std::floor(std::min({a.y, b.y, c.y}))));
    const int y1 = std::min(height - 1, static_cast<int>(std::ceil(std::max({a.y, b.y, c.y}))));
    const double inv = 1.0 / area;
    for (int py = y0; py <= y1; ++py) {
        const double y = py + 0.5;
        for (int px = x0; px <= x1; ++px) {
            const double x = px + 0.5;
            const double w0 = ((b.x - x) * (c.y - y) - (b.y - y) * (c.x - x)) * inv;
            const double w1 = ((c.x - x) * (a.y - y) - (c.y - y) * (a.x - x)) * inv;
            const double w2 = 1.0 - w0 - w1;
            if (w0 < 0.0 || w1 < 0.0 || w2 < 0.0) continue;
            fn(px, py, w0, w1, w2);
        }
    }
}

}  // namespace

ViewLabel view_label_for(double declination, bool flipped) {
    if (flipped) return ViewLabel::Flipped;
    if (std::abs(declination) < kZenithToleranceDeg) return ViewLabel::Zenith;
    return ViewLabel::Standard;
}

std::vector<ShotPlan> shot_plan_catalog(std::uint64_t seed, double jitter_deg, double distance) {
    Rng rng(seed);
    std::vector<ShotPlan> plans;
    auto add = [&](double az, double dec, bool flipped) {
        ShotPlan s;
        s.azimuth = az + gaussian(rng, 0.0, jitter_deg);
        s.declination = std::abs(dec + gaussian(rng, 0.0, jitter_deg));
        s.flipped = flipped;
        s.distance = distance;
        s.view_label = view_label_for(s.declination, s.flipped);
        plans.push_back(s);
    };
    for (double turn : {0.0, 90.0}) {
        for (double az : {0.0, 45.0, 90.0})
            for (double dec : {0.0, 45.0, 90.0}) add(az + turn, dec, false);
        add(turn, kBelowHorizonDeclination, false);
    }
    for (double dec : {0.0, 45.0, 90.0, kBelowHorizonDeclination}) add(45.0, dec, true);
    return plans;
}

std::string_view to_string(LightKind kind) {
    switch (kind) {
        case LightKind::Directional: return "directional";
        case LightKind::Spot: return "spot";
        case LightKind::Point: return "point";
    }
    return "directional";
}

LightKind parse_light_kind(std::string_view text) {
    if (text == "directional" || text == "sun") return LightKind::Directional;
    if (text == "spot") return LightKind::Spot;
    if (text == "point") return LightKind::Point;
    throw Error(ErrorCode::InvalidInput, "unknown light kind '" + std::string(text) + "'");
}

std::string_view to_string(Decoration d) {
    switch (d) {
        case Decoration::None: return "none";
        case Decoration::RimStripes: return "rim_stripes";
        case Decoration::Leaves: return "leaves";
        case Decoration::ProceduralNoise: return "procedural_noise";
    }
    return "none";
}

DecorationSpec decorate_for_class(std::string_view class_label, Rng& rng) {
    require_class_index(class_label);
    // The coin is flipped for every class so the stream position does not
    // depend on the label.
    const bool decorate = uniform01(rng) < 0.5;
    const bool six = uniform01(rng) < 0.5;
    if (!decorate) return {};
    if (class_label == "Dr24-25") return {Decoration::RimStripes, 0};
    if (class_label == "Dr35" || class_label == "Dr36") return {Decoration::Leaves, six ? 6 : 4};
    if (class_label == "Dr29" || class_label == "Dr37") return {Decoration::ProceduralNoise, 0};
    return {};
}

RenderResult rasterize(const SceneSpec& scene) {
    if (scene.mesh == nullptr) throw Error(ErrorCode::InvalidInput, "scene has no mesh");
    if (scene.width < 1 || scene.height < 1) throw Error(ErrorCode::InvalidInput, "image size must be positive");
    if (!(scene.light.intensity > 0.0) || scene.light.ambient < 0.0 || scene.light.ambient > 1.0)
        throw Error(ErrorCode::InvalidInput, "light intensity must be > 0 and ambient in [0,1]");
    if (!(scene.shot.distance >= 1.0)) throw Error(ErrorCode::InvalidInput, "shot distance factor must be >= 1");
    const mesh::VesselMesh& mesh = *scene.mesh;
    const std::size_t nv = mesh.vertices.size();

    std::vector<std::uint32_t> visible;
    for (std::uint32_t t = 0; t < mesh.triangles.size(); ++t)
        if (mesh.visible(mesh.triangles[t])) visible.push_back(t);
    if (visible.empty()) throw Error(ErrorCode::DegenerateScene, "no visible geometry to render");

    // Decoration coordinates come from the unbroken, unflipped mesh.
    double zmin = std::numeric_limits<double>::infinity(), zmax = -zmin;
    for (const Vec3& v : mesh.vertices) {
        zmin = std::min(zmin, v.z);
        zmax = std::max(zmax, v.z);
    }
    const double zspan = zmax > zmin ? zmax - zmin : 1.0;

    // Flipped vessels turn 180 degrees about the x axis; everything rests on z = 0.
    std::vector<Vec3> placed(nv);
    for (std::size_t k = 0; k < nv; ++k) {
        const Vec3& v = mesh.vertices[k];
        placed[k] = scene.shot.flipped ? Vec3{v.x, -v.y, -v.z} : v;
    }
    std::vector<std::uint8_t> used(nv, 0);
    for (auto t : visible)
        for (auto idx : mesh.triangles[t]) used[idx] = 1;
    double ground = std::numeric_limits<double>::infinity();
    Vec3 target{};
    std::size_t used_count = 0;
    for (std::size_t k = 0; k < nv; ++k)
        if (used[k]) {
            ground = std::min(ground, placed[k].z);
            target += placed[k];
            ++used_count;
        }
    for (auto& p : placed) p.z -= ground;
    target = target * (1.0 / static_cast<double>(used_count));
    target.z -= ground;
    double bound_radius = 0.0;
    for (std::size_t k = 0; k < nv; ++k)
        if (used[k]) bound_radius = std::max(bound_radius, norm(placed[k] - target));
    if (!(bound_radius > 0.0)) throw Error(ErrorCode::DegenerateScene, "visible geometry has zero extent");

    std::vector<Vec3> normals(nv, Vec3{});
    for (auto t : visible) {
        const auto& tri = mesh.triangles[t];
        const Vec3 n = cross(placed[tri[1]] - placed[tri[0]], placed[tri[2]] - placed[tri[0]]);
        for (auto idx : tri) normals[idx] += n;
    }
    for (auto& n : normals) n = normalized(n);

    // Camera.
    const double fov = deg2rad(scene.fov_deg);
    const double az = deg2rad(scene.shot.azimuth);
    const double dec = deg2rad(scene.shot.declination);
    const double dist = scene.shot.distance * bound_radius / std::sin(fov / 2.0);
    Camera cam;
    cam.eye = target + Vec3{std::sin(dec) * std::cos(az), std::sin(dec) * std::sin(az), std::cos(dec)} * dist;
    cam.eye.z = std::max(cam.eye.z, 0.02 * bound_radius);
    cam.forward = normalized(target - cam.eye);
    const Vec3 world_up = std::abs(cam.forward.z) > 0.999 ? Vec3{-std::cos(az), -std::sin(az), 0.0} : Vec3{0.0, 0.0, 1.0};
    cam.right = normalized(cross(cam.forward, world_up));
    cam.up = cross(cam.right, cam.forward);
    cam.focal = (scene.height / 2.0) / std::tan(fov / 2.0);
    cam.cx = scene.width / 2.0;
    cam.cy = scene.height / 2.0;
    // Frame like a photographer: shift the image centre onto the centre of
    // the projected silhouette's bounding box.
    {
        double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
        for (std::size_t k = 0; k < nv; ++k) {
            double sx, sy, depth;
            if (!used[k] || !cam.project(placed[k], sx, sy, depth)) continue;
            x0 = std::min(x0, sx);
            x1 = std::max(x1, sx);
            y0 = std::min(y0, sy);
            y1 = std::max(y1, sy);
        }
        if (x0 <= x1) {
            cam.cx += scene.width / 2.0 - 0.5 * (x0 + x1);
            cam.cy += scene.height / 2.0 - 0.5 * (y0 + y1);
        }
    }

    // Light.
    const Vec3 light_dir = normalized(scene.light.direction);
    const Vec3 light_pos = target + light_dir * (scene.light.distance * bound_radius);
    const Vec3 spot_axis = normalized(target - light_pos);
    const double spot_cos = std::cos(deg2rad(scene.light.spot_half_angle_deg));

    const int W = scene.width, H = scene.height;
    const std::size_t npix = static_cast<std::size_t>(W) * static_cast<std::size_t>(H);

    // Visibility pass.
    std::vector<ScreenVertex> screen(nv);
    for (std::size_t k = 0; k < nv; ++k) {
        if (!used[k]) continue;
        double sx, sy, depth;
        if (cam.project(placed[k], sx, sy, depth)) screen[k] = {sx, sy, 1.0 / depth, true};
    }
    std::vector<double> zbuf(npix, std::numeric_limits<double>::infinity());
    std::vector<std::int32_t> tri_id(npix, -1);
    std::vector<std::array<double, 3>> bary(npix);
    for (auto t : visible) {
        const auto& tri = mesh.triangles[t];
        const ScreenVertex &a = screen[tri[0]], &b = screen[tri[1]], &c = screen[tri[2]];
        if (!a.valid || !b.valid || !c.valid) continue;
        scan_triangle(a, b, c, W, H, [&](int px, int py, double w0, double w1, double w2) {
            const double iz = w0 * a.inv_depth + w1 * b.inv_depth + w2 * c.inv_depth;
            const double depth = 1.0 / iz;
            const std::size_t idx = static_cast<std::size_t>(py) * W + px;
            if (depth < zbuf[idx]) {
                zbuf[idx] = depth;
                tri_id[idx] = static_cast<std::int32_t>(t);
                bary[idx] = {w0 * a.inv_depth / iz, w1 * b.inv_depth / iz, w2 * c.inv_depth / iz};
            }
        });
    }

    // Planar hard shadows: project visible triangles onto the ground along the
    // light rays and mark the screen pixels they cover.
    std::vector<std::uint8_t> shadow(npix, 0);
    const bool casts_shadow = scene.light.kind != LightKind::Point;
    if (casts_shadow) {
        auto to_ground = [&](const Vec3& v, Vec3& g) {
            if (scene.light.kind == LightKind::Directional) {
                if (light_dir.z <= 1e-6) return false;
                g = v - light_dir * (v.z / light_dir.z);
            } else {
                if (light_pos.z <= v.z + 1e-9) return false;
                g = light_pos + (v - light_pos) * (light_pos.z / (light_pos.z - v.z));
            }
            g.z = 0.0;
            return true;
        };
        std::vector<ScreenVertex> shadow_screen(nv);
        for (std::size_t k = 0; k < nv; ++k) {
            if (!used[k]) continue;
            Vec3 g;
            double sx, sy, depth;
            if (to_ground(placed[k], g) && cam.project(g, sx, sy, depth)) shadow_screen[k] = {sx, sy, 1.0 / depth, true};
        }
        for (auto t : visible) {
            const auto& tri = mesh.triangles[t];
            const ScreenVertex &a = shadow_screen[tri[0]], &b = shadow_screen[tri[1]], &c = shadow_screen[tri[2]];
            if (!a.valid || !b.valid || !c.valid) continue;
            scan_triangle(a, b, c, W, H, [&](int px, int py, double, double, double) {
                shadow[static_cast<std::size_t>(py) * W + px] = 1;
            });
        }
    }

    // Shading pass.
    RenderResult result;
    result.image = RgbImage(W, H, scene.background);
    result.pot_mask.assign(npix, 0);
    const auto& mat = scene.material;
    const auto& light = scene.light;
    std::uint8_t* out = result.image.data().data();
#pragma omp parallel for schedule(static)
    for (int py = 0; py < H; ++py) {
        for (int px = 0; px < W; ++px) {
            const std::size_t idx = static_cast<std::size_t>(py) * W + px;
            const std::int32_t t = tri_id[idx];
            std::uint8_t* rgb = out + idx * 3;
            if (t < 0) {
                if (!shadow[idx]) continue;
                if (cam.ray(px + 0.5, py + 0.5).z >= 0.0) continue;  // above the horizon
                for (int ch = 0; ch < 3; ++ch) rgb[ch] = to_byte(scene.background[static_cast<std::size_t>(ch)] * scene.shadow_factor);
                continue;
            }
            result.pot_mask[idx] = 1;
            const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
            const auto& w = bary[idx];
            const Vec3 p = placed[tri[0]] * w[0] + placed[tri[1]] * w[1] + placed[tri[2]] * w[2];
            const Vec3 o = mesh.vertices[tri[0]] * w[0] + mesh.vertices[tri[1]] * w[1] + mesh.vertices[tri[2]] * w[2];
            Vec3 n = normalized(normals[tri[0]] * w[0] + normals[tri[1]] * w[1] + normals[tri[2]] * w[2]);
            const Vec3 view = normalized(cam.eye - p);
            if (dot(n, view) < 0.0) n = -n;

            Vec3 to_light = light_dir;
            double reach = 1.0;
            if (light.kind != LightKind::Directional) {
                to_light = normalized(light_pos - p);
                if (light.kind == LightKind::Spot && dot(-to_light, spot_axis) < spot_cos) reach = 0.0;
            }
            const double ndl = dot(n, to_light);
            const double diffuse = reach * std::max(0.0, ndl);
            double spec = 0.0;
            if (ndl > 0.0 && mat.specular_strength > 0.0)
                spec = reach * std::pow(std::max(0.0, dot(n, normalized(to_light + view))), mat.shininess);

            const double tfrac = (o.z - zmin) / zspan;
            const double theta = std::atan2(o.y, o.x);
            const double deco = decoration_factor(mat.decoration, tfrac, theta, scene.seed);
            const double lit = light.ambient + light.intensity * diffuse;
            const double highlight = 255.0 * mat.specular_strength * light.intensity * spec;
            for (int ch = 0; ch < 3; ++ch)
                rgb[ch] = to_byte(mat.base_color[static_cast<std::size_t>(ch)] * deco * lit + highlight);
        }
    }

    for (int py = 0; py < H; ++py)
        for (int px = 0; px < W; ++px) {
            if (!result.pot_mask[static_cast<std::size_t>(py) * W + px]) continue;
            ++result.pot_pixels;
            auto& b = result.pot_box;
            if (b.empty()) {
                b = {px, py, px, py};
            } else {
                b.x0 = std::min(b.x0, px);
                b.y0 = std::min(b.y0, py);
                b.x1 = std::max(b.x1, px);
                b.y1 = std::max(b.y1, py);
            }
        }
    return result;
}

nlohmann::json to_json(const ShotPlan& s) {
    return {{"azimuth", s.azimuth}, {"declination", s.declination}, {"flipped", s.flipped},
            {"distance", s.distance}, {"view_label", std::string(to_string(s.view_label))}};
}

nlohmann::json to_json(const LightSpec& l) {
    return {{"kind", std::string(to_string(l.kind))},
            {"direction", {l.direction.x, l.direction.y, l.direction.z}},
            {"distance", l.distance},
            {"intensity", l.intensity},
            {"ambient", l.ambient},
            {"spot_half_angle_deg", l.spot_half_angle_deg}};
}

nlohmann::json to_json(const MaterialSpec& m) {
    return {{"base_color", {m.base_color[0], m.base_color[1], m.base_color[2]}},
            {"specular_strength", m.specular_strength},
            {"shininess", m.shininess},
            {"decoration", std::string(to_string(m.decoration.kind))},
            {"leaf_count", m.decoration.leaf_count}};
}

}  // namespace potsynth::render
