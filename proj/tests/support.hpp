#pragma once

// Random generators and slow reference implementations shared by the unit
// tests and the acceptance runner.

#include "potsynth/dataset.hpp"
#include "potsynth/detector.hpp"
#include "potsynth/fracture.hpp"
#include "potsynth/image.hpp"
#include "potsynth/mesh.hpp"
#include "potsynth/metrics.hpp"
#include "potsynth/profile.hpp"
#include "potsynth/rng.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iterator>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include <unistd.h>

namespace testsupport {

using namespace potsynth;
namespace fs = std::filesystem;

class TempDir {
public:
    explicit TempDir(const std::string& tag = "potsynth") {
        static int counter = 0;
        path_ = fs::temp_directory_path() / (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

inline std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Relative path -> file bytes for every regular file below `root`.
inline std::map<std::string, std::string> tree_contents(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = slurp(e.path());
    return out;
}

// ---------------------------------------------------------------- bitmaps

inline Bitmap random_bitmap(Rng& rng, int w, int h, double density = 0.5) {
    Bitmap bm(w, h);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) bm.set(i, j, uniform01(rng) < density ? 1 : 0);
    return bm;
}

// Literal evaluation of |x[i][j]-x[i-1][j]| + |x[i][j]-x[i][j-1]| > 0, with
// missing neighbours contributing nothing.
inline std::set<profile::Pixel> border_oracle(const Bitmap& bm) {
    std::set<profile::Pixel> out;
    for (int i = 0; i < bm.height(); ++i)
        for (int j = 0; j < bm.width(); ++j) {
            int sum = 0;
            if (i - 1 >= 0) sum += std::abs(int(bm.at(i, j)) - int(bm.at(i - 1, j)));
            if (j - 1 >= 0) sum += std::abs(int(bm.at(i, j)) - int(bm.at(i, j - 1)));
            if (sum > 0) out.insert({i, j});
        }
    return out;
}

// Filled axis-aligned ellipse inside a size x size canvas.
inline Bitmap random_blob(Rng& rng, int size = 20) {
    Bitmap bm(size, size);
    const double ry = uniform(rng, 3.0, size / 2.0 - 2.0);
    const double rx = uniform(rng, 3.0, size / 2.0 - 2.0);
    const double cy = uniform(rng, ry + 1.0, size - ry - 1.0);
    const double cx = uniform(rng, rx + 1.0, size - rx - 1.0);
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j) {
            const double u = (i + 0.5 - cy) / ry, v = (j + 0.5 - cx) / rx;
            bm.set(i, j, u * u + v * v <= 1.0 ? 1 : 0);
        }
    return bm;
}

inline Bitmap filled_rect(int w, int h, int r0, int c0, int rows, int cols) {
    Bitmap bm(w, h);
    for (int i = r0; i < r0 + rows; ++i)
        for (int j = c0; j < c0 + cols; ++j) bm.set(i, j, 1);
    return bm;
}

// --------------------------------------------------------------- profiles

// Open wall curve going upward with strictly positive radii.
inline profile::ProfileCurve random_profile(Rng& rng, int min_points = 3, int max_points = 40) {
    profile::ProfileCurve c;
    const int n = static_cast<int>(uniform_int(rng, min_points, max_points));
    double h = uniform(rng, -1.0, 1.0);
    for (int k = 0; k < n; ++k) {
        c.points.push_back({uniform(rng, 0.1, 10.0), h});
        h += uniform(rng, 0.05, 1.0);
    }
    return c;
}

inline profile::ProfileCurve zigzag(int n) {
    profile::ProfileCurve c;
    for (int k = 0; k < n; ++k) c.points.push_back({k % 2 == 0 ? 1.0 : 3.0, static_cast<double>(k)});
    return c;
}

inline double sqr(double x) { return x * x; }

inline Vec3 rotate_z(const Vec3& v, double a) {
    return {v.x * std::cos(a) - v.y * std::sin(a), v.x * std::sin(a) + v.y * std::cos(a), v.z};
}

// Every rotated vertex has a partner within tol (and vice versa by counting).
inline double max_rematch_error(const std::vector<Vec3>& verts, double angle) {
    // bucket by z so matching stays near-linear
    std::map<long long, std::vector<Vec3>> by_z;
    for (const auto& v : verts) by_z[std::llround(v.z * 1e6)].push_back(v);
    double worst = 0.0;
    for (const auto& v : verts) {
        const Vec3 r = rotate_z(v, angle);
        double best = INFINITY;
        for (long long key = std::llround(r.z * 1e6) - 1; key <= std::llround(r.z * 1e6) + 1; ++key) {
            auto it = by_z.find(key);
            if (it == by_z.end()) continue;
            for (const auto& w : it->second) best = std::min(best, std::sqrt(distance2(r, w)));
        }
        worst = std::max(worst, best);
    }
    return worst;
}

// Mesh with at most `max_vertices` vertices from a random profile.
inline mesh::VesselMesh random_mesh(Rng& rng, std::size_t max_vertices) {
    const int segments = static_cast<int>(uniform_int(rng, 3, 256));
    const int max_points = std::max<int>(3, static_cast<int>(max_vertices / static_cast<std::size_t>(segments)));
    auto curve = random_profile(rng, 3, std::min(max_points, 400));
    return mesh::revolve(curve, segments);
}

inline fracture::FractureEvent random_event(Rng& rng, const Box3& box) {
    fracture::FractureEvent ev;
    const Vec3 e = box.extent();
    ev.center = {uniform(rng, box.lo.x - 0.1 * e.x, box.hi.x + 0.1 * e.x),
                 uniform(rng, box.lo.y - 0.1 * e.y, box.hi.y + 0.1 * e.y),
                 uniform(rng, box.lo.z - 0.1 * e.z, box.hi.z + 0.1 * e.z)};
    ev.radius = box.diagonal() * uniform(rng, 0.05, 0.6);
    ev.r_min = 0.5 * ev.radius;
    ev.r_max = 1.5 * ev.radius;
    const auto n = uniform_int(rng, 0, 6);
    for (long long k = 0; k < n; ++k) {
        Vec3 d{gaussian(rng, 0, 1), gaussian(rng, 0, 1), gaussian(rng, 0, 1)};
        const double len = std::sqrt(dot(d, d));
        ev.rescue_points.push_back(ev.center + d * (uniform(rng, ev.r_min, ev.r_max) / len));
    }
    return ev;
}

// |v-P| <= R and |v-P| < |v-q| for every rescue point, compared as squares
// so no rounding from a square root enters the decision.
inline std::vector<std::uint8_t> fracture_oracle(const mesh::VesselMesh& m, const fracture::FractureEvent& ev) {
    std::vector<std::uint8_t> out = m.removed;
    for (std::size_t k = 0; k < m.vertices.size(); ++k) {
        const Vec3& v = m.vertices[k];
        const double dp = sqr(v.x - ev.center.x) + sqr(v.y - ev.center.y) + sqr(v.z - ev.center.z);
        bool hit = dp <= sqr(ev.radius);
        for (const auto& q : ev.rescue_points) {
            const double dq = sqr(v.x - q.x) + sqr(v.y - q.y) + sqr(v.z - q.z);
            if (!(dp < dq)) hit = false;
        }
        if (hit) out[k] = 1;
    }
    return out;
}

// --------------------------------------------------------------- detector

inline RgbImage random_image(Rng& rng, int w, int h) {
    RgbImage img(w, h);
    for (auto& b : img.data()) b = static_cast<std::uint8_t>(uniform_int(rng, 0, 255));
    return img;
}

// Exact overlap in integer units: source pixel x spans [x*ow, (x+1)*ow),
// output cell c spans [c*W, (c+1)*W).
inline RgbImage area_average_oracle(const RgbImage& img, int ow, int oh) {
    const long long W = img.width(), H = img.height();
    RgbImage out(ow, oh);
    for (int r = 0; r < oh; ++r)
        for (int c = 0; c < ow; ++c) {
            long long acc[3] = {0, 0, 0};
            long long area = 0;
            for (long long y = 0; y < H; ++y) {
                const long long oy = std::min((y + 1) * oh, (r + 1) * H) - std::max(y * oh, r * H);
                if (oy <= 0) continue;
                for (long long x = 0; x < W; ++x) {
                    const long long ox = std::min((x + 1) * ow, (c + 1) * W) - std::max(x * ow, c * W);
                    if (ox <= 0) continue;
                    const Rgb p = img.at(static_cast<int>(y), static_cast<int>(x));
                    for (int ch = 0; ch < 3; ++ch) acc[ch] += ox * oy * p[static_cast<std::size_t>(ch)];
                    area += ox * oy;
                }
            }
            Rgb px{};
            for (int ch = 0; ch < 3; ++ch)
                px[static_cast<std::size_t>(ch)] = static_cast<std::uint8_t>(std::lround(double(acc[ch]) / double(area)));
            out.set(r, c, px);
        }
    return out;
}

inline std::vector<detect::FeatureRow> features_oracle(const RgbImage& img) {
    const int n = img.width() * img.height();
    std::vector<std::array<double, 4>> raw(static_cast<std::size_t>(n));
    for (int i = 0; i < img.height(); ++i)
        for (int j = 0; j < img.width(); ++j) {
            const Rgb p = img.at(i, j);
            const double r = p[0] / 255.0, g = p[1] / 255.0, b = p[2] / 255.0;
            const double mx = std::max(r, std::max(g, b)), mn = std::min(r, std::min(g, b));
            raw[static_cast<std::size_t>(i * img.width() + j)] = {mx > 0 ? (mx - mn) / mx : 0.0, mx,
                                                                  (j + 0.5) / img.width(), (i + 0.5) / img.height()};
        }
    for (int k = 0; k < 4; ++k) {
        double lo = raw[0][k], hi = raw[0][k];
        for (const auto& r : raw) lo = std::min(lo, r[k]), hi = std::max(hi, r[k]);
        for (auto& r : raw) r[k] = hi > lo ? (r[k] - lo) / (hi - lo) : 0.0;
    }
    return raw;
}

// DBSCAN restated on graphs: core points connect when within eps; clusters are
// the core components numbered by their lowest index; a non-core point joins
// the lowest-numbered cluster among its core neighbours, else it is noise.
inline std::vector<int> dbscan_oracle(const std::vector<detect::FeatureRow>& pts, double eps, int min_pts) {
    const std::size_t n = pts.size();
    auto close = [&](std::size_t a, std::size_t b) {
        double s = 0;
        for (int k = 0; k < 4; ++k) s += sqr(pts[a][k] - pts[b][k]);
        return std::sqrt(s) <= eps;
    };
    std::vector<bool> core(n);
    for (std::size_t a = 0; a < n; ++a) {
        int c = 0;
        for (std::size_t b = 0; b < n; ++b) c += close(a, b);
        core[a] = c >= min_pts;
    }
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (core[a] && core[b] && close(a, b)) {
                const auto ra = find(a), rb = find(b);
                parent[std::max(ra, rb)] = std::min(ra, rb);
            }
    std::map<std::size_t, int> id_of_root;
    for (std::size_t a = 0; a < n; ++a)
        if (core[a] && !id_of_root.count(find(a))) id_of_root[find(a)] = static_cast<int>(id_of_root.size());
    std::vector<int> label(n, -1);
    for (std::size_t a = 0; a < n; ++a) {
        if (core[a]) {
            label[a] = id_of_root[find(a)];
            continue;
        }
        for (std::size_t b = 0; b < n; ++b)
            if (core[b] && close(a, b)) {
                const int id = id_of_root[find(b)];
                if (label[a] < 0 || id < label[a]) label[a] = id;
            }
    }
    return label;
}

// Same partition (noise fixed as noise) up to a bijective relabelling.
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    std::map<int, int> ab, ba;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if ((a[k] < 0) != (b[k] < 0)) return false;
        if (a[k] < 0) continue;
        auto [i1, new1] = ab.emplace(a[k], b[k]);
        auto [i2, new2] = ba.emplace(b[k], a[k]);
        if (i1->second != b[k] || i2->second != a[k]) return false;
    }
    return true;
}

// Random point sets mixing tight blobs, a uniform background and duplicates.
inline std::vector<detect::FeatureRow> random_feature_set(Rng& rng, std::size_t max_points) {
    const auto n = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<long long>(max_points)));
    const int blobs = static_cast<int>(uniform_int(rng, 1, 6));
    std::vector<detect::FeatureRow> centres;
    for (int b = 0; b < blobs; ++b)
        centres.push_back({uniform01(rng), uniform01(rng), uniform01(rng), uniform01(rng)});
    const double spread = uniform(rng, 0.01, 0.08);
    std::vector<detect::FeatureRow> pts;
    for (std::size_t k = 0; k < n; ++k) {
        if (uniform01(rng) < 0.2 || pts.empty()) {
            pts.push_back({uniform01(rng), uniform01(rng), uniform01(rng), uniform01(rng)});
        } else if (uniform01(rng) < 0.05) {
            pts.push_back(pts[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long long>(pts.size()) - 1))]);
        } else {
            const auto& c = centres[static_cast<std::size_t>(uniform_int(rng, 0, blobs - 1))];
            pts.push_back({c[0] + gaussian(rng, 0, spread), c[1] + gaussian(rng, 0, spread),
                           c[2] + gaussian(rng, 0, spread), c[3] + gaussian(rng, 0, spread)});
        }
    }
    return pts;
}

// ---------------------------------------------------------------- metrics

inline const std::vector<std::pair<std::string, int>>& catalog_counts() {
    static const std::vector<std::pair<std::string, int>> counts = {
        {"Dr18", 51}, {"Dr24-25", 8}, {"Dr27", 28}, {"Dr29", 18}, {"Dr33", 13},
        {"Dr35", 12}, {"Dr36", 15},   {"Dr37", 9},  {"Dr38", 8},
    };
    return counts;
}

// Catalog with the given vessel counts per class; each vessel gets 1-6 photos
// with random views, and about a third are damaged.
inline dataset::Catalog make_catalog(const std::vector<std::pair<std::string, int>>& counts, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<dataset::VesselRecord> vessels;
    int serial = 0;
    for (const auto& [label, n] : counts)
        for (int v = 0; v < n; ++v) {
            dataset::VesselRecord rec;
            rec.vessel_id = "V" + std::to_string(serial++);
            rec.raw_form = label.substr(2);
            rec.class_label = label;
            rec.damaged = uniform01(rng) < 0.3;
            const auto photos = uniform_int(rng, 1, 6);
            for (long long p = 0; p < photos; ++p)
                rec.photos.push_back({rec.vessel_id + "-p" + std::to_string(p),
                                      static_cast<ViewLabel>(uniform_int(rng, 0, 2))});
            vessels.push_back(std::move(rec));
        }
    return dataset::Catalog(std::move(vessels));
}

// Predictions for every test photo of every split; each photo is right with
// probability `skill`, otherwise a uniformly random other class.
inline std::vector<metrics::PredictionRow> random_predictions(const dataset::Catalog& cat,
                                                              const dataset::SplitPlan& plan, Rng& rng,
                                                              double skill) {
    std::vector<std::string> labels;
    for (const auto& [label, ids] : cat.vessels_by_class()) labels.push_back(label);
    std::vector<metrics::PredictionRow> rows;
    for (std::size_t s = 0; s < plan.splits.size(); ++s)
        for (const auto& [label, cs] : plan.splits[s].classes)
            for (const auto& vid : cs.test) {
                const auto* v = cat.find_vessel(vid);
                for (const auto& p : v->photos) {
                    std::string pred = label;
                    if (uniform01(rng) >= skill && labels.size() > 1) {
                        do pred = labels[static_cast<std::size_t>(uniform_int(rng, 0, long(labels.size()) - 1))];
                        while (pred == label);
                    }
                    rows.push_back({static_cast<int>(s), p.photo_id, vid, label, pred});
                }
            }
    return rows;
}

// Mean over classes of the mean over test vessels of the mean over that
// vessel's photos of [correct].
inline double triple_average_oracle(const std::vector<metrics::PredictionRow>& split_rows) {
    std::map<std::string, std::map<std::string, std::vector<int>>> tree;
    for (const auto& r : split_rows) tree[r.true_class][r.vessel_id].push_back(r.true_class == r.predicted_class);
    double over_classes = 0.0;
    for (const auto& [label, vessels] : tree) {
        double over_vessels = 0.0;
        for (const auto& [vid, hits] : vessels) {
            double over_photos = 0.0;
            for (int h : hits) over_photos += h;
            over_vessels += over_photos / static_cast<double>(hits.size());
        }
        over_classes += over_vessels / static_cast<double>(vessels.size());
    }
    return over_classes / static_cast<double>(tree.size());
}

inline double bessel_variance(const std::vector<double>& xs) {
    long double mean = 0;
    for (double x : xs) mean += x;
    mean /= xs.size();
    long double ss = 0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return static_cast<double>(ss / (xs.size() - 1));
}

}  // namespace testsupport
