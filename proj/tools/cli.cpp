#include "cli.hpp"

#include "potsynth/dataset.hpp"
#include "potsynth/detector.hpp"
#include "potsynth/error.hpp"
#include "potsynth/fracture.hpp"
#include "potsynth/generate.hpp"
#include "potsynth/image.hpp"
#include "potsynth/mesh.hpp"
#include "potsynth/metrics.hpp"
#include "potsynth/profile.hpp"
#include "potsynth/render.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>

#ifndef POTSYNTH_VERSION
#define POTSYNTH_VERSION "0.0.0"
#endif

namespace potsynth::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void print_error(std::ostream& err, std::string_view code, std::string_view message) {
    err << json{{"error", {{"code", code}, {"message", message}}}}.dump() << '\n';
}

profile::ProfileCurve load_curve(const fs::path& path, double scale, std::optional<int> axis, int smooth) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".csv") {
        auto c = profile::read_csv(path, scale);
        return smooth > 1 ? profile::smooth_profile(c, smooth) : c;
    }
    profile::ExtractOptions opt;
    opt.scale = scale;
    opt.axis_column = axis;
    opt.smooth_window = smooth;
    return profile::extract_profile(read_bitmap(path), opt);
}

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidInput, path.string() + ": " + e.what());
    }
}

void write_json(const json& j, const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << j.dump(2) << '\n';
}

void ensure_parent(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

struct CurveArgs {
    std::string path;
    double scale = 1.0;
    std::optional<int> axis;
    int smooth = 1;
};

void add_curve_options(CLI::App* app, CurveArgs& a) {
    app->add_option("--profile", a.path, "Profile drawing (.pbm/.png) or curve (.csv)")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("--scale", a.scale, "Physical units per drawing pixel")->check(CLI::PositiveNumber);
    app->add_option("--axis-column", a.axis, "Drawing column of the rotation axis");
    app->add_option("--smooth", a.smooth, "Odd smoothing window")->check(CLI::Range(1, 1 << 20));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Synthetic pottery image generation, detection and evaluation"};
    app.require_subcommand(0, 1);
    bool show_version = false;
    bool show_schema = false;
    app.add_flag("--version", show_version, "Print version information as JSON");
    app.add_flag("--manifest-schema", show_schema, "Print the generate manifest schema as JSON");

    // extract-profile
    auto* ex = app.add_subcommand("extract-profile", "Extract the axial section from a profile drawing");
    std::string ex_in, ex_out;
    CurveArgs ex_curve;
    ex->add_option("--input", ex_in, "Drawing (.pbm or .png)")->required()->check(CLI::ExistingFile);
    ex->add_option("--out", ex_out, "Output curve CSV")->required();
    ex->add_option("--scale", ex_curve.scale, "Physical units per drawing pixel")->check(CLI::PositiveNumber);
    ex->add_option("--axis-column", ex_curve.axis, "Drawing column of the rotation axis");
    ex->add_option("--smooth", ex_curve.smooth, "Odd smoothing window")->check(CLI::Range(1, 1 << 20));

    // revolve
    auto* rv = app.add_subcommand("revolve", "Revolve a profile into a triangle mesh (OBJ)");
    CurveArgs rv_curve;
    std::string rv_out;
    int rv_segments = mesh::kDefaultSegments;
    add_curve_options(rv, rv_curve);
    rv->add_option("--segments", rv_segments, "Azimuthal segments")->check(CLI::Range(3, 1 << 16));
    rv->add_option("--out", rv_out, "Output OBJ")->required();

    // fracture
    auto* fr = app.add_subcommand("fracture", "Sample and apply a fracture plan");
    CurveArgs fr_curve;
    std::string fr_out, fr_plan_out, fr_plan_in;
    int fr_segments = mesh::kDefaultSegments;
    std::optional<std::uint64_t> fr_seed;
    add_curve_options(fr, fr_curve);
    fr->add_option("--segments", fr_segments, "Azimuthal segments")->check(CLI::Range(3, 1 << 16));
    fr->add_option("--seed", fr_seed, "Seed for the fracture plan");
    fr->add_option("--plan", fr_plan_in, "Replay an existing plan JSON instead of sampling")
        ->check(CLI::ExistingFile);
    fr->add_option("--out", fr_out, "Output OBJ of the broken mesh")->required();
    fr->add_option("--plan-out", fr_plan_out, "Write the applied plan JSON");

    // render
    auto* rd = app.add_subcommand("render", "Render one image of a vessel");
    CurveArgs rd_curve;
    std::string rd_out, rd_plan, rd_meta, rd_class, rd_light = "directional";
    int rd_segments = mesh::kDefaultSegments, rd_w = 512, rd_h = 512;
    std::optional<std::uint64_t> rd_seed;
    render::ShotPlan rd_shot;
    add_curve_options(rd, rd_curve);
    rd->add_option("--segments", rd_segments, "Azimuthal segments")->check(CLI::Range(3, 1 << 16));
    rd->add_option("--plan", rd_plan, "Fracture plan JSON to apply")->check(CLI::ExistingFile);
    rd->add_option("--seed", rd_seed, "Seed for procedural decoration");
    rd->add_option("--azimuth", rd_shot.azimuth, "Camera azimuth in degrees");
    rd->add_option("--declination", rd_shot.declination, "Camera declination in degrees (0 = from above)")
        ->check(CLI::Range(0.0, 180.0));
    rd->add_flag("--flipped", rd_shot.flipped, "Turn the vessel upside down");
    rd->add_option("--distance", rd_shot.distance, "Camera distance as a multiple of the framing distance")
        ->check(CLI::Range(1.0, 100.0));
    rd->add_option("--light", rd_light, "directional|spot|point");
    rd->add_option("--class", rd_class, "Class label selecting decoration");
    rd->add_option("--width", rd_w)->check(CLI::Range(2, 1 << 14));
    rd->add_option("--height", rd_h)->check(CLI::Range(2, 1 << 14));
    rd->add_option("--out", rd_out, "Output PNG")->required();
    rd->add_option("--meta", rd_meta, "Write scene description and pot box as JSON");

    // generate
    auto* gen = app.add_subcommand("generate", "Generate a synthetic dataset");
    std::string gen_config, gen_out;
    std::optional<std::uint64_t> gen_seed;
    int gen_jobs = 1;
    gen->add_option("--config", gen_config, "Randomisation config JSON")->required()->check(CLI::ExistingFile);
    gen->add_option("--seed", gen_seed, "Master seed (else read from config)");
    gen->add_option("--out", gen_out, "Output directory (absent or empty)")->required();
    gen->add_option("--jobs", gen_jobs, "Worker threads")->check(CLI::Range(1, 1024));

    // detect
    auto* det = app.add_subcommand("detect", "Locate and crop the vessel in photographs");
    std::string det_in, det_out;
    int det_jobs = 1;
    det->add_option("--input", det_in, "PNG file or directory")->required()->check(CLI::ExistingPath);
    det->add_option("--output", det_out, "Output PNG file or directory")->required();
    det->add_option("--jobs", det_jobs, "Worker threads")->check(CLI::Range(1, 1024));

    // split
    auto* sp = app.add_subcommand("split", "Generate train/validation/test partitions");
    std::string sp_catalog, sp_out, sp_experiment;
    std::optional<std::uint64_t> sp_seed;
    int sp_n = dataset::kNumSplits;
    sp->add_option("--catalog", sp_catalog, "catalog.csv")->required()->check(CLI::ExistingFile);
    sp->add_option("--seed", sp_seed, "Master seed")->required();
    sp->add_option("--n-splits", sp_n)->check(CLI::Range(1, 100000));
    sp->add_option("--out", sp_out, "Output splits.json")->required();
    sp->add_option("--experiment-config", sp_experiment, "Also write the training config JSON");

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "Weighted accuracy and confusion report from predictions");
    std::vector<std::string> ev_preds;
    std::string ev_catalog, ev_splits, ev_out, ev_prior = "both";
    std::optional<std::string> ev_reference;
    ev->add_option("--predictions", ev_preds, "predictions.csv, optionally NAME=PATH (repeatable)")->required();
    ev->add_option("--catalog", ev_catalog, "catalog.csv")->required()->check(CLI::ExistingFile);
    ev->add_option("--prior", ev_prior, "uniform|mol|both")->check(CLI::IsMember({"uniform", "mol", "both"}));
    ev->add_option("--splits", ev_splits, "splits.json for completeness checks")->check(CLI::ExistingFile);
    ev->add_option("--reference", ev_reference, "Configuration name used as reality-gap baseline");
    ev->add_option("--out", ev_out, "Write the JSON report here");

    // bound
    auto* bd = app.add_subcommand("bound", "Training-set size needed for a generalisation gap");
    double bd_h = 0, bd_delta = 0, bd_gap = 0;
    bd->set_help_flag("--help", "Print this help message and exit");
    bd->add_option("--h", bd_h, "VC dimension")->required();
    bd->add_option("--delta", bd_delta, "Failure probability")->required();
    bd->add_option("--gap", bd_gap, "Target risk gap")->required();

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return kExitOk;
        } catch (const CLI::CallForAllHelp&) {
            out << app.help("", CLI::AppFormatMode::All);
            return kExitOk;
        } catch (const CLI::ParseError& e) {
            throw UsageError(e.what());
        }

        if (*ex) {
            const auto curve = load_curve(ex_in, ex_curve.scale, ex_curve.axis, ex_curve.smooth);
            ensure_parent(ex_out);
            profile::write_csv(curve, ex_out);
            out << json{{"points", curve.points.size()}, {"closed", curve.closed}, {"out", ex_out}}.dump() << '\n';
        } else if (*rv) {
            const auto curve = load_curve(rv_curve.path, rv_curve.scale, rv_curve.axis, rv_curve.smooth);
            const auto m = mesh::revolve(curve, rv_segments);
            ensure_parent(rv_out);
            mesh::write_obj(m, rv_out);
            out << json{{"vertices", m.vertices.size()}, {"triangles", m.triangles.size()}, {"out", rv_out}}.dump()
                << '\n';
        } else if (*fr) {
            if (fr_plan_in.empty() && !fr_seed) throw UsageError("fracture: --seed is required unless --plan is given");
            const auto curve = load_curve(fr_curve.path, fr_curve.scale, fr_curve.axis, fr_curve.smooth);
            auto m = mesh::revolve(curve, fr_segments);
            const auto plan = fr_plan_in.empty() ? fracture::sample_fracture_plan(mesh::mesh_bbox(m), {}, *fr_seed)
                                                 : fracture::plan_from_json(read_json(fr_plan_in));
            fracture::apply_plan(m, plan);
            ensure_parent(fr_out);
            mesh::write_obj(m, fr_out);
            if (!fr_plan_out.empty()) write_json(fracture::to_json(plan), fr_plan_out);
            out << json{{"vertices", m.vertices.size()},
                        {"removed", m.removed_count()},
                        {"events", plan.events.size()},
                        {"damaged_azimuth_fraction", fracture::damaged_azimuth_fraction(m)}}
                       .dump()
                << '\n';
        } else if (*rd) {
            if (!rd_seed) throw UsageError("render: --seed is required");
            const auto curve = load_curve(rd_curve.path, rd_curve.scale, rd_curve.axis, rd_curve.smooth);
            auto m = mesh::revolve(curve, rd_segments);
            if (!rd_plan.empty()) fracture::apply_plan(m, fracture::plan_from_json(read_json(rd_plan)));
            render::SceneSpec scene;
            scene.mesh = &m;
            scene.shot = rd_shot;
            scene.shot.view_label = render::view_label_for(rd_shot.declination, rd_shot.flipped);
            scene.light.kind = render::parse_light_kind(rd_light);
            scene.width = rd_w;
            scene.height = rd_h;
            scene.seed = *rd_seed;
            if (!rd_class.empty()) {
                Rng rng(*rd_seed);
                scene.material.decoration = render::decorate_for_class(rd_class, rng);
            }
            const auto result = render::rasterize(scene);
            ensure_parent(rd_out);
            write_png(result.image, rd_out);
            const json meta{{"shot", render::to_json(scene.shot)},
                            {"light", render::to_json(scene.light)},
                            {"material", render::to_json(scene.material)},
                            {"pot_pixels", result.pot_pixels},
                            {"pot_box",
                             {{"x0", result.pot_box.x0},
                              {"y0", result.pot_box.y0},
                              {"x1", result.pot_box.x1},
                              {"y1", result.pot_box.y1}}}};
            if (!rd_meta.empty()) write_json(meta, rd_meta);
            out << meta.dump() << '\n';
        } else if (*gen) {
            auto config = generate::load_config(gen_config);
            const auto seed = gen_seed ? gen_seed : config.seed;
            if (!seed) throw UsageError("generate: --seed is required when the config has no seed");
            const auto summary = generate::generate_dataset(config, *seed, gen_out, gen_jobs);
            out << json{{"images", summary.images}, {"out", gen_out}, {"seed", *seed}}.dump() << '\n';
        } else if (*det) {
            if (fs::is_directory(det_in)) {
                const auto s = detect::detect_directory(det_in, det_out, det_jobs);
                out << json{{"processed", s.processed}, {"failed", s.failed}}.dump() << '\n';
                return s.failed == 0 ? kExitOk : kExitData;
            }
            const auto d = detect::detect_and_crop(read_png(det_in));
            ensure_parent(det_out);
            write_png(d.crop, det_out);
            fs::path sidecar = det_out;
            sidecar.replace_extension(".json");
            write_json(detect::sidecar_json(d), sidecar);
            out << detect::sidecar_json(d).dump() << '\n';
        } else if (*sp) {
            const auto catalog = dataset::read_catalog_csv(sp_catalog);
            const auto plan = dataset::make_splits(catalog, *sp_seed, sp_n);
            write_json(dataset::to_json(plan), sp_out);
            if (!sp_experiment.empty()) write_json(dataset::experiment_config(), sp_experiment);
            out << json{{"splits", plan.splits.size()}, {"out", sp_out}}.dump() << '\n';
        } else if (*ev) {
            std::vector<std::pair<std::string, std::vector<metrics::PredictionRow>>> configs;
            for (const auto& spec : ev_preds) {
                const auto eq = spec.find('=');
                const std::string path = eq == std::string::npos ? spec : spec.substr(eq + 1);
                std::string name = eq == std::string::npos ? fs::path(path).stem().string() : spec.substr(0, eq);
                if (!fs::is_regular_file(path)) throw UsageError("--predictions: file not found: " + path);
                for (const auto& c : configs)
                    if (c.first == name) throw UsageError("duplicate configuration name " + name);
                configs.emplace_back(std::move(name), metrics::read_predictions_csv(path));
            }
            const auto catalog = dataset::read_catalog_csv(ev_catalog);
            std::optional<dataset::SplitPlan> splits;
            if (!ev_splits.empty()) splits = dataset::splits_from_json(read_json(ev_splits));
            metrics::EvalOptions opt;
            if (ev_prior == "uniform") opt.priors = {metrics::PriorKind::Uniform};
            else if (ev_prior == "mol") opt.priors = {metrics::PriorKind::Mol};
            else opt.priors = {metrics::PriorKind::Uniform, metrics::PriorKind::Mol};
            opt.reference = ev_reference;
            const auto report = metrics::evaluate(configs, catalog, splits ? &*splits : nullptr, opt);
            if (!ev_out.empty()) write_json(metrics::to_json(report), ev_out);
            out << metrics::to_text(report);
        } else if (*bd) {
            const auto r = metrics::min_train_size(bd_h, bd_delta, bd_gap);
            out << json{{"h", bd_h}, {"delta", bd_delta}, {"gap", bd_gap}, {"n", r.n}, {"bound", r.bound}}.dump()
                << '\n';
        } else if (show_version) {
            out << json{{"name", "potsynth"}, {"version", POTSYNTH_VERSION}}.dump() << '\n';
        } else if (show_schema) {
            out << generate::manifest_schema().dump(2) << '\n';
        } else {
            throw UsageError("no subcommand given; see --help");
        }
        return kExitOk;
    } catch (const UsageError& e) {
        print_error(err, "UsageError", e.what());
        return kExitUsage;
    } catch (const Error& e) {
        print_error(err, to_string(e.code()), e.what());
        return kExitData;
    } catch (const std::exception& e) {
        print_error(err, "Internal", e.what());
        return kExitData;
    }
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace potsynth::cli
