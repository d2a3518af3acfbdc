#include "potsynth/detector.hpp"

#include "potsynth/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <exception>
#include <fstream>
#include <limits>

namespace potsynth::detect {

namespace fs = std::filesystem;

namespace {

double feature_distance(const FeatureRow& a, const FeatureRow& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s);
}

using Neighbourhoods = std::vector<std::vector<int>>;

Neighbourhoods neighbours_serial(std::span<const FeatureRow> pts, double eps) {
    const int n = static_cast<int>(pts.size());
    Neighbourhoods nb(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (feature_distance(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]) <= eps)
                nb[static_cast<std::size_t>(i)].push_back(j);
    return nb;
}

Neighbourhoods neighbours_parallel(std::span<const FeatureRow> pts, double eps) {
    const int n = static_cast<int>(pts.size());
    Neighbourhoods nb(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 16)
    for (int i = 0; i < n; ++i) {
        auto& row = nb[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j)
            if (feature_distance(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]) <= eps)
                row.push_back(j);
    }
    return nb;
}

ClusterAssignment expand(const Neighbourhoods& nb, int min_pts) {
    constexpr int kUnvisited = -2;
    const std::size_t n = nb.size();
    ClusterAssignment out;
    out.labels.assign(n, kUnvisited);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (out.labels[i] != kUnvisited) continue;
        if (static_cast<int>(nb[i].size()) < min_pts) {
            out.labels[i] = ClusterAssignment::kNoise;
            continue;
        }
        const int id = next++;
        out.sizes.push_back(0);
        out.labels[i] = id;
        ++out.sizes.back();
        std::deque<int> queue(nb[i].begin(), nb[i].end());
        while (!queue.empty()) {
            const auto j = static_cast<std::size_t>(queue.front());
            queue.pop_front();
            if (out.labels[j] == ClusterAssignment::kNoise) {
                out.labels[j] = id;  // border point
                ++out.sizes.back();
                continue;
            }
            if (out.labels[j] != kUnvisited) continue;
            out.labels[j] = id;
            ++out.sizes.back();
            if (static_cast<int>(nb[j].size()) >= min_pts) queue.insert(queue.end(), nb[j].begin(), nb[j].end());
        }
    }
    return out;
}

}  // namespace

RgbImage downscale(const RgbImage& image, int out_w, int out_h) {
    const int W = image.width(), H = image.height();
    if (W < out_w || H < out_h)
        throw Error(ErrorCode::ImageTooSmall, "image " + std::to_string(W) + "x" + std::to_string(H) +
                                                  " is smaller than " + std::to_string(out_w) + "x" +
                                                  std::to_string(out_h));
    const double sx = static_cast<double>(W) / out_w;
    const double sy = static_cast<double>(H) / out_h;
    RgbImage out(out_w, out_h);
    for (int r = 0; r < out_h; ++r) {
        const double y0 = r * sy, y1 = (r + 1) * sy;
        for (int c = 0; c < out_w; ++c) {
            const double x0 = c * sx, x1 = (c + 1) * sx;
            double acc[3] = {0.0, 0.0, 0.0};
            double area = 0.0;
            for (int y = static_cast<int>(std::floor(y0)); y < std::min(H, static_cast<int>(std::ceil(y1))); ++y) {
                const double wy = std::min<double>(y + 1, y1) - std::max<double>(y, y0);
                if (wy <= 0.0) continue;
                for (int x = static_cast<int>(std::floor(x0)); x < std::min(W, static_cast<int>(std::ceil(x1))); ++x) {
                    const double wx = std::min<double>(x + 1, x1) - std::max<double>(x, x0);
                    if (wx <= 0.0) continue;
                    const Rgb p = image.at(y, x);
                    const double w = wx * wy;
                    for (int ch = 0; ch < 3; ++ch) acc[ch] += w * p[static_cast<std::size_t>(ch)];
                    area += w;
                }
            }
            Rgb px{};
            for (int ch = 0; ch < 3; ++ch)
                px[static_cast<std::size_t>(ch)] =
                    static_cast<std::uint8_t>(std::clamp(std::floor(acc[ch] / area + 0.5), 0.0, 255.0));
            out.set(r, c, px);
        }
    }
    return out;
}

RgbImage downscale_30(const RgbImage& image) { return downscale(image, kGrid, kGrid); }

PixelFeatures features(const RgbImage& img) {
    const int w = img.width(), h = img.height();
    PixelFeatures f;
    f.rows.reserve(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
            const Rgb p = img.at(i, j);
            const int mx = std::max({p[0], p[1], p[2]});
            const int mn = std::min({p[0], p[1], p[2]});
            const double sat = mx == 0 ? 0.0 : static_cast<double>(mx - mn) / mx;
            const double val = mx / 255.0;
            f.rows.push_back({sat, val, (j + 0.5) / w, (i + 0.5) / h});
        }
    for (std::size_t k = 0; k < 4; ++k) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& r : f.rows) {
            lo = std::min(lo, r[k]);
            hi = std::max(hi, r[k]);
        }
        const double span = hi - lo;
        for (auto& r : f.rows) r[k] = span > 0.0 ? (r[k] - lo) / span : 0.0;
    }
    return f;
}

namespace serial {
ClusterAssignment dbscan(std::span<const FeatureRow> points, double eps, int min_pts) {
    return expand(neighbours_serial(points, eps), min_pts);
}
}  // namespace serial

ClusterAssignment dbscan(std::span<const FeatureRow> points, double eps, int min_pts) {
    return expand(neighbours_parallel(points, eps), min_pts);
}

int select_pot_cluster(const ClusterAssignment& a, const PixelFeatures& feats, std::size_t min_size) {
    if (a.labels.size() != feats.rows.size())
        throw Error(ErrorCode::MisalignedInputs, "cluster labels and features differ in length");
    std::vector<double> dist(a.cluster_count(), 0.0);
    for (std::size_t k = 0; k < a.labels.size(); ++k) {
        const int id = a.labels[k];
        if (id < 0) continue;
        const auto& r = feats.rows[k];
        dist[static_cast<std::size_t>(id)] += (r[2] - 0.5) * (r[2] - 0.5) + (r[3] - 0.5) * (r[3] - 0.5);
    }
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t id = 0; id < a.cluster_count(); ++id) {
        if (a.sizes[id] < min_size) continue;
        const double mean = dist[id] / static_cast<double>(a.sizes[id]);
        if (mean < best_d) {
            best_d = mean;
            best = static_cast<int>(id);
        }
    }
    if (best < 0)
        throw Error(ErrorCode::NoPotFound, "no cluster with at least " + std::to_string(min_size) + " pixels");
    return best;
}

Detection crop_from_cluster(const RgbImage& image, const ClusterAssignment& a, int pot_id, int grid) {
    if (pot_id < 0 || static_cast<std::size_t>(pot_id) >= a.cluster_count())
        throw Error(ErrorCode::InvalidInput, "invalid pot cluster id " + std::to_string(pot_id));
    if (a.labels.size() != static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid))
        throw Error(ErrorCode::MisalignedInputs, "cluster labels do not cover the grid");
    const int W = image.width(), H = image.height();
    const double cell_w = static_cast<double>(W) / grid, cell_h = static_cast<double>(H) / grid;

    int jmin = grid, jmax = -1, imin = grid, imax = -1;
    double sx = 0.0, sy = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < a.labels.size(); ++k) {
        if (a.labels[k] != pot_id) continue;
        const int i = static_cast<int>(k) / grid, j = static_cast<int>(k) % grid;
        jmin = std::min(jmin, j);
        jmax = std::max(jmax, j);
        imin = std::min(imin, i);
        imax = std::max(imax, i);
        sx += (j + 0.5) * cell_w;
        sy += (i + 0.5) * cell_h;
        ++count;
    }
    const double lx = (jmax - jmin + 1) * cell_w;
    const double ly = (imax - imin + 1) * cell_h;
    const double side = kCropGrowth * std::max(lx, ly);
    const int half = static_cast<int>(std::floor(side / 2.0));

    Detection d;
    d.cluster_id = pot_id;
    d.cluster_size = count;
    d.cluster_count = a.cluster_count();
    auto& box = d.box;
    box.center_x = sx / static_cast<double>(count);
    box.center_y = sy / static_cast<double>(count);
    box.side = std::max(1, 2 * half);
    box.width = std::min(box.side, W);
    box.height = std::min(box.side, H);
    const int cx = static_cast<int>(std::lround(box.center_x));
    const int cy = static_cast<int>(std::lround(box.center_y));
    box.x0 = std::clamp(cx - half, 0, W - box.width);
    box.y0 = std::clamp(cy - half, 0, H - box.height);
    d.crop = image.crop(box.x0, box.y0, box.width, box.height);
    return d;
}

Detection detect_and_crop(const RgbImage& image) {
    const RgbImage small = downscale_30(image);
    const PixelFeatures feats = features(small);
    const ClusterAssignment clusters = dbscan(feats.rows);
    const int pot = select_pot_cluster(clusters, feats);
    return crop_from_cluster(image, clusters, pot);
}

nlohmann::json sidecar_json(const Detection& d) {
    return {
        {"crop_box",
         {{"center_x", d.box.center_x},
          {"center_y", d.box.center_y},
          {"side", d.box.side},
          {"x0", d.box.x0},
          {"y0", d.box.y0},
          {"width", d.box.width},
          {"height", d.box.height}}},
        {"cluster_id", d.cluster_id},
        {"cluster_size", d.cluster_size},
        {"cluster_count", d.cluster_count},
    };
}

BatchSummary detect_directory(const fs::path& input_dir, const fs::path& output_dir, int jobs) {
    if (!fs::is_directory(input_dir)) throw Error(ErrorCode::Io, input_dir.string() + " is not a directory");
    std::vector<fs::path> inputs;
    for (const auto& e : fs::recursive_directory_iterator(input_dir)) {
        if (!e.is_regular_file()) continue;
        auto ext = e.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (ext == ".png") inputs.push_back(e.path());
    }
    std::sort(inputs.begin(), inputs.end());

    std::vector<std::uint8_t> failed(inputs.size(), 0);
    std::vector<std::exception_ptr> errors(inputs.size());
    const int n = static_cast<int>(inputs.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, jobs))
    for (int k = 0; k < n; ++k) {
        const auto& in = inputs[static_cast<std::size_t>(k)];
        try {
            const fs::path out = output_dir / fs::relative(in, input_dir);
            fs::create_directories(out.parent_path());
            fs::path sidecar = out;
            sidecar.replace_extension(".json");
            nlohmann::json meta;
            try {
                const Detection d = detect_and_crop(read_png(in));
                write_png(d.crop, out);
                meta = sidecar_json(d);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::NoPotFound && e.code() != ErrorCode::ImageTooSmall) throw;
                meta = {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
                failed[static_cast<std::size_t>(k)] = 1;
            }
            std::ofstream(sidecar) << meta.dump(2) << '\n';
        } catch (...) {
            errors[static_cast<std::size_t>(k)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    BatchSummary s;
    s.processed = inputs.size();
    s.failed = static_cast<std::size_t>(std::count(failed.begin(), failed.end(), std::uint8_t{1}));
    return s;
}

}  // namespace potsynth::detect
