#include "potsynth/generate.hpp"

#include "potsynth/classes.hpp"
#include "potsynth/error.hpp"
#include "potsynth/rng.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>

namespace potsynth::generate {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fracture::RealRange real_range(const json& j, const char* key, fracture::RealRange fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    fracture::RealRange r{v.at(0).get<double>(), v.at(1).get<double>()};
    if (r.lo > r.hi) throw Error(ErrorCode::InvalidInput, std::string("config: range '") + key + "' has lo > hi");
    return r;
}

fracture::IntRange int_range(const json& j, const char* key, fracture::IntRange fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    return {v.at(0).get<long long>(), v.at(1).get<long long>()};
}

std::string image_name(const std::string& class_label, int index) {
    std::ostringstream os;
    os << class_label << '_' << std::setw(4) << std::setfill('0') << index << ".png";
    return os.str();
}

// Runs body(i) for i in [0, n) on up to `jobs` threads; rethrows the first
// failure (lowest index) after the loop.
template <class Body>
void parallel_for(int n, int jobs, Body&& body) {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, jobs))
    for (int i = 0; i < n; ++i) {
        try {
            body(i);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

GenerateConfig config_from_json(const json& j, const fs::path& base_dir) {
    try {
        GenerateConfig c;
        for (const auto& p : j.at("profiles")) {
            ProfileSource src;
            src.class_label = p.at("class").get<std::string>();
            require_class_index(src.class_label);
            fs::path path = p.at("path").get<std::string>();
            src.path = path.is_absolute() ? path : base_dir / path;
            src.scale = p.value("scale", 1.0);
            if (p.contains("axis_column")) src.axis_column = p.at("axis_column").get<int>();
            c.profiles.push_back(std::move(src));
        }
        c.images_per_class = j.value("images_per_class", c.images_per_class);
        c.vessels_per_class = j.value("vessels_per_class", c.vessels_per_class);
        c.width = j.value("width", c.width);
        c.height = j.value("height", c.height);
        c.segments = j.value("segments", c.segments);
        c.profile_stride = j.value("profile_stride", c.profile_stride);
        c.smooth_window = j.value("smooth_window", c.smooth_window);
        c.jitter_sigma = j.value("jitter_sigma", c.jitter_sigma);
        if (j.contains("fracture")) {
            const auto& f = j.at("fracture");
            c.fracture_probability = f.value("probability", c.fracture_probability);
            c.fracture_ranges.event_count = int_range(f, "event_count", c.fracture_ranges.event_count);
            c.fracture_ranges.radius_fraction = real_range(f, "radius_fraction", c.fracture_ranges.radius_fraction);
            c.fracture_ranges.rescue_count = int_range(f, "rescue_count", c.fracture_ranges.rescue_count);
            c.fracture_ranges.r_min_factor = f.value("r_min_factor", c.fracture_ranges.r_min_factor);
            c.fracture_ranges.r_max_factor = f.value("r_max_factor", c.fracture_ranges.r_max_factor);
            c.fracture_ranges.bbox_inflation = f.value("bbox_inflation", c.fracture_ranges.bbox_inflation);
            c.max_removed_fraction = f.value("max_removed_fraction", c.max_removed_fraction);
            c.drop_detached_fragments = f.value("drop_detached_fragments", c.drop_detached_fragments);
            fracture::validate(c.fracture_ranges);
        }
        if (j.contains("lights")) {
            c.lights.clear();
            for (const auto& l : j.at("lights")) c.lights.push_back(render::parse_light_kind(l.get<std::string>()));
            if (c.lights.empty()) throw Error(ErrorCode::InvalidInput, "config: 'lights' must not be empty");
        }
        c.intensity = real_range(j, "intensity", c.intensity);
        c.ambient = real_range(j, "ambient", c.ambient);
        c.specular = real_range(j, "specular", c.specular);
        c.light_elevation_deg = real_range(j, "light_elevation_deg", c.light_elevation_deg);
        c.decorations = j.value("decorations", c.decorations);
        c.shot_jitter_deg = j.value("shot_jitter_deg", c.shot_jitter_deg);
        c.distance = real_range(j, "distance", c.distance);
        if (j.contains("background")) {
            const auto& b = j.at("background");
            c.background = {b.at(0).get<std::uint8_t>(), b.at(1).get<std::uint8_t>(), b.at(2).get<std::uint8_t>()};
        }
        c.background_jitter = j.value("background_jitter", c.background_jitter);
        c.sieve_max_fraction = j.value("sieve_max_fraction", c.sieve_max_fraction);
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();

        if (c.profiles.empty()) throw Error(ErrorCode::InvalidInput, "config: no profiles listed");
        if (c.images_per_class < 0 || c.vessels_per_class < 1)
            throw Error(ErrorCode::InvalidInput, "config: images_per_class >= 0 and vessels_per_class >= 1 required");
        if (c.width < 30 || c.height < 30) throw Error(ErrorCode::InvalidInput, "config: images must be >= 30x30");
        if (c.distance.lo < 1.0) throw Error(ErrorCode::InvalidInput, "config: distance factors must be >= 1");
        if (c.ambient.lo < 0.0 || c.ambient.hi > 1.0 || !(c.intensity.lo > 0.0))
            throw Error(ErrorCode::InvalidInput, "config: ambient must lie in [0,1] and intensity be > 0");
        return c;
    } catch (const json::exception& ex) {
        throw Error(ErrorCode::InvalidInput, std::string("malformed generate config: ") + ex.what());
    }
}

GenerateConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& ex) {
        throw Error(ErrorCode::InvalidInput, path.string() + ": " + ex.what());
    }
    return config_from_json(j, path.parent_path());
}

std::vector<LabelledProfile> load_profiles(const GenerateConfig& config) {
    std::vector<LabelledProfile> out;
    for (const auto& src : config.profiles) {
        LabelledProfile lp;
        lp.class_label = src.class_label;
        if (src.path.extension() == ".csv") {
            lp.curve = profile::read_csv(src.path, src.scale);
        } else {
            profile::ExtractOptions opts;
            opts.scale = src.scale;
            opts.axis_column = src.axis_column;
            lp.curve = profile::extract_profile(read_bitmap(src.path), opts);
        }
        profile::validate(lp.curve);
        out.push_back(std::move(lp));
    }
    return out;
}

json manifest_schema() {
    return {
        {"format", "csv"},
        {"header", kManifestHeader},
        {"columns",
         json::array({
             {{"name", "image_path"}, {"type", "string"}, {"description", "PNG path relative to the dataset root"}},
             {{"name", "class"}, {"type", "string"}, {"enum", kClassLabels}},
             {{"name", "vessel_instance"}, {"type", "string"}},
             {{"name", "view_label"}, {"type", "string"}, {"enum", {"standard", "zenith", "flipped"}}},
             {{"name", "damaged_flag"}, {"type", "integer"}, {"enum", {0, 1}},
              {"description", "1 when fractures reach at least half of the azimuth"}},
             {{"name", "master_seed"}, {"type", "uint64"}},
             {{"name", "image_seed"}, {"type", "uint64"}},
             {{"name", "bbox_x0"}, {"type", "integer"}, {"description", "vessel pixel bounds, inclusive"}},
             {{"name", "bbox_y0"}, {"type", "integer"}},
             {{"name", "bbox_x1"}, {"type", "integer"}},
             {{"name", "bbox_y1"}, {"type", "integer"}},
         })},
    };
}

std::vector<ManifestRow> read_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    std::string line;
    std::getline(in, line);
    if (line != kManifestHeader) throw Error(ErrorCode::InvalidInput, path.string() + ": unexpected manifest header");
    std::vector<ManifestRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 11) throw Error(ErrorCode::InvalidInput, path.string() + ": bad manifest row: " + line);
        ManifestRow r;
        r.image_path = f[0];
        r.class_label = f[1];
        r.vessel_instance = f[2];
        const auto view = parse_view_label(f[3]);
        if (!view) throw Error(ErrorCode::InvalidInput, path.string() + ": bad view label " + f[3]);
        r.view_label = *view;
        r.damaged = f[4] == "1";
        r.master_seed = std::stoull(f[5]);
        r.image_seed = std::stoull(f[6]);
        r.pot_box = {std::stoi(f[7]), std::stoi(f[8]), std::stoi(f[9]), std::stoi(f[10])};
        rows.push_back(std::move(r));
    }
    return rows;
}

Vessel build_vessel(const GenerateConfig& config, const std::vector<LabelledProfile>& class_profiles,
                    const std::string& class_label, int vessel_index, std::uint64_t master_seed) {
    if (class_profiles.empty()) throw Error(ErrorCode::InvalidInput, "no profile available for class " + class_label);
    const std::size_t ci = require_class_index(class_label);
    const std::uint64_t vseed = derive_seed(master_seed, {0, ci, static_cast<std::uint64_t>(vessel_index)});
    Rng rng(vseed);

    Vessel v;
    v.class_label = class_label;
    v.instance_id = class_label + "-v" + std::to_string(vessel_index);
    const auto pick = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long long>(class_profiles.size()) - 1));
    profile::ProfileCurve curve = class_profiles[pick].curve;
    if (config.smooth_window > 1) {
        const int n = static_cast<int>(curve.points.size());
        curve = profile::smooth_profile(curve, std::min(config.smooth_window, n % 2 == 1 ? n : n - 1));
    }
    curve = profile::decimate(curve, config.profile_stride);
    curve = profile::jitter_profile(curve, config.jitter_sigma, rng());
    v.mesh = mesh::revolve(curve, config.segments);

    const std::uint64_t fracture_seed = rng();
    if (uniform01(rng) < config.fracture_probability) {
        const Box3 box = mesh::mesh_bbox(v.mesh);
        for (std::uint64_t attempt = 0; attempt < 5; ++attempt) {
            auto plan = fracture::sample_fracture_plan(box, config.fracture_ranges, derive_seed(fracture_seed, {attempt}));
            mesh::VesselMesh broken = v.mesh;
            fracture::apply_plan(broken, plan);
            if (config.drop_detached_fragments) fracture::drop_detached_fragments(broken);
            const double removed = static_cast<double>(broken.removed_count()) / static_cast<double>(broken.size());
            if (removed <= config.max_removed_fraction) {
                v.mesh = std::move(broken);
                v.plan = std::move(plan);
                break;
            }
        }
    }
    v.damaged = fracture::damaged_azimuth_fraction(v.mesh) >= 0.5;
    v.base_color = {static_cast<std::uint8_t>(std::lround(uniform(rng, 150.0, 200.0))),
                    static_cast<std::uint8_t>(std::lround(uniform(rng, 60.0, 95.0))),
                    static_cast<std::uint8_t>(std::lround(uniform(rng, 35.0, 60.0)))};
    return v;
}

RenderedImage render_image(const GenerateConfig& config, const Vessel& vessel, int class_index, int image_index,
                           std::uint64_t master_seed) {
    const std::uint64_t image_seed =
        derive_seed(master_seed, {1, static_cast<std::uint64_t>(class_index), static_cast<std::uint64_t>(image_index)});
    Rng rng(image_seed);

    render::SceneSpec scene;
    scene.mesh = &vessel.mesh;
    scene.width = config.width;
    scene.height = config.height;

    const auto catalog = render::shot_plan_catalog(rng(), config.shot_jitter_deg);
    scene.shot = catalog[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long long>(catalog.size()) - 1))];
    scene.shot.distance = uniform(rng, config.distance.lo, config.distance.hi);

    auto& light = scene.light;
    light.kind = config.lights[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long long>(config.lights.size()) - 1))];
    const double la = uniform(rng, 0.0, 2.0 * kPi);
    const double le = uniform(rng, config.light_elevation_deg.lo, config.light_elevation_deg.hi) * kPi / 180.0;
    light.direction = {std::cos(le) * std::cos(la), std::cos(le) * std::sin(la), std::sin(le)};
    light.distance = uniform(rng, 4.0, 6.0);
    light.intensity = uniform(rng, config.intensity.lo, config.intensity.hi);
    light.ambient = uniform(rng, config.ambient.lo, config.ambient.hi);
    light.spot_half_angle_deg = uniform(rng, 25.0, 40.0);

    auto& mat = scene.material;
    mat.base_color = vessel.base_color;
    mat.specular_strength = uniform(rng, config.specular.lo, config.specular.hi);
    mat.shininess = uniform(rng, 16.0, 64.0);
    const auto deco = render::decorate_for_class(vessel.class_label, rng);
    if (config.decorations) mat.decoration = deco;

    for (std::size_t ch = 0; ch < 3; ++ch) {
        const double f = uniform(rng, 1.0 - config.background_jitter, 1.0 + config.background_jitter);
        scene.background[ch] = static_cast<std::uint8_t>(std::clamp(std::lround(config.background[ch] * f), 0L, 255L));
    }
    scene.seed = rng();

    // Automatic sieve: frames where the vessel nearly fills the picture or
    // touches its edge are re-shot from further away.
    render::RenderResult res;
    for (int attempt = 0; attempt < 6; ++attempt) {
        res = render::rasterize(scene);
        const auto& b = res.pot_box;
        const bool too_close = b.width() > config.sieve_max_fraction * config.width ||
                               b.height() > config.sieve_max_fraction * config.height || b.x0 == 0 || b.y0 == 0 ||
                               b.x1 == config.width - 1 || b.y1 == config.height - 1;
        if (!too_close) break;
        scene.shot.distance *= 1.2;
    }

    RenderedImage out;
    out.image = std::move(res.image);
    out.scene = scene;
    auto& row = out.row;
    row.image_path = (fs::path("images") / vessel.class_label / image_name(vessel.class_label, image_index)).generic_string();
    row.class_label = vessel.class_label;
    row.vessel_instance = vessel.instance_id;
    row.view_label = scene.shot.view_label;
    row.damaged = vessel.damaged;
    row.master_seed = master_seed;
    row.image_seed = image_seed;
    row.pot_box = res.pot_box;
    return out;
}

GenerateSummary generate_dataset(const GenerateConfig& config, std::uint64_t master_seed, const fs::path& out_dir,
                                 int jobs) {
    if (fs::exists(out_dir) && (!fs::is_directory(out_dir) || !fs::is_empty(out_dir)))
        throw Error(ErrorCode::InvalidInput, "output directory " + out_dir.string() + " exists and is not empty");

    const auto profiles = load_profiles(config);
    std::vector<std::vector<LabelledProfile>> by_class(kNumClasses);
    for (const auto& p : profiles) by_class[require_class_index(p.class_label)].push_back(p);

    fs::path staging = out_dir;
    staging += ".partial";
    fs::remove_all(staging);
    GenerateSummary summary;
    try {
        fs::create_directories(staging / "plans");
        for (std::size_t ci = 0; ci < kNumClasses; ++ci) {
            if (by_class[ci].empty()) continue;
            const std::string label(kClassLabels[ci]);
            fs::create_directories(staging / "images" / label);

            std::vector<Vessel> vessels(static_cast<std::size_t>(config.vessels_per_class));
            parallel_for(config.vessels_per_class, jobs, [&](int v) {
                vessels[static_cast<std::size_t>(v)] = build_vessel(config, by_class[ci], label, v, master_seed);
            });
            for (const auto& v : vessels) {
                std::ofstream plan(staging / "plans" / (v.instance_id + ".json"));
                plan << fracture::to_json(v.plan).dump(2) << '\n';
            }

            std::vector<ManifestRow> rows(static_cast<std::size_t>(config.images_per_class));
            parallel_for(config.images_per_class, jobs, [&](int i) {
                const auto& vessel = vessels[static_cast<std::size_t>(i % config.vessels_per_class)];
                RenderedImage img = render_image(config, vessel, static_cast<int>(ci), i, master_seed);
                write_png(img.image, staging / img.row.image_path);
                rows[static_cast<std::size_t>(i)] = std::move(img.row);
            });
            summary.rows.insert(summary.rows.end(), rows.begin(), rows.end());
        }

        std::ofstream manifest(staging / "manifest.csv");
        manifest << kManifestHeader << '\n';
        for (const auto& r : summary.rows) {
            manifest << r.image_path << ',' << r.class_label << ',' << r.vessel_instance << ',' << to_string(r.view_label)
                     << ',' << (r.damaged ? 1 : 0) << ',' << r.master_seed << ',' << r.image_seed << ',' << r.pot_box.x0
                     << ',' << r.pot_box.y0 << ',' << r.pot_box.x1 << ',' << r.pot_box.y1 << '\n';
        }
        manifest.close();
        if (!manifest) throw Error(ErrorCode::Io, "failed writing manifest");

        if (fs::exists(out_dir)) fs::remove(out_dir);  // verified empty above
        fs::rename(staging, out_dir);
    } catch (...) {
        std::error_code ec;
        fs::remove_all(staging, ec);
        throw;
    }
    summary.images = summary.rows.size();
    return summary;
}

}  // namespace potsynth::generate
