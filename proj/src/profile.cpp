#include "potsynth/profile.hpp"

#include "potsynth/error.hpp"
#include "potsynth/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

namespace potsynth::profile {

namespace {

inline bool is_border(const Bitmap& bm, int i, int j) {
    const int x = bm.at(i, j);
    const int up = i > 0 ? bm.at(i - 1, j) : x;
    const int left = j > 0 ? bm.at(i, j - 1) : x;
    return std::abs(x - up) + std::abs(x - left) > 0;
}

std::string describe(Pixel p) { return "(" + std::to_string(p.row) + "," + std::to_string(p.col) + ")"; }

// Clockwise scan order in image coordinates, starting east.
constexpr std::array<std::array<int, 2>, 8> kNeighbourOffsets = {{
    {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1},
}};

// Dense occupancy grid over the border's bounding box; -1 marks non-members.
class MemberGrid {
public:
    explicit MemberGrid(const BorderSet& border) {
        row0_ = col0_ = std::numeric_limits<int>::max();
        int row1 = std::numeric_limits<int>::min(), col1 = std::numeric_limits<int>::min();
        for (const Pixel& p : border) {
            row0_ = std::min(row0_, p.row);
            col0_ = std::min(col0_, p.col);
            row1 = std::max(row1, p.row);
            col1 = std::max(col1, p.col);
        }
        rows_ = row1 - row0_ + 1;
        cols_ = col1 - col0_ + 1;
        ids_.assign(static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_), -1);
        for (std::size_t k = 0; k < border.size(); ++k) ids_[slot(border[k])] = static_cast<int>(k);
    }

    int id(int row, int col) const {
        if (row < row0_ || col < col0_ || row >= row0_ + rows_ || col >= col0_ + cols_) return -1;
        return ids_[slot({row, col})];
    }

private:
    std::size_t slot(Pixel p) const {
        return static_cast<std::size_t>(p.row - row0_) * static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(p.col - col0_);
    }

    int row0_ = 0, col0_ = 0, rows_ = 0, cols_ = 0;
    std::vector<int> ids_;
};

}  // namespace

namespace serial {

BorderSet detect_border(const Bitmap& bitmap) {
    BorderSet out;
    for (int i = 0; i < bitmap.height(); ++i)
        for (int j = 0; j < bitmap.width(); ++j)
            if (is_border(bitmap, i, j)) out.push_back({i, j});
    return out;
}

}  // namespace serial

BorderSet detect_border(const Bitmap& bitmap) {
    const int h = bitmap.height();
    std::vector<BorderSet> rows(static_cast<std::size_t>(h));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < h; ++i) {
        auto& row = rows[static_cast<std::size_t>(i)];
        for (int j = 0; j < bitmap.width(); ++j)
            if (is_border(bitmap, i, j)) row.push_back({i, j});
    }
    BorderSet out;
    for (auto& row : rows) out.insert(out.end(), row.begin(), row.end());
    return out;
}

OrderedBorder order_border(const BorderSet& border) {
    if (border.empty()) throw Error(ErrorCode::InvalidInput, "order_border: empty border set");
    BorderSet members = border;
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    const MemberGrid grid(members);
    const std::size_t n = members.size();

    // Connected components under 8-connectivity.
    {
        std::vector<char> seen(n, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        std::size_t reached = 1;
        while (!stack.empty()) {
            const Pixel p = members[static_cast<std::size_t>(stack.back())];
            stack.pop_back();
            for (auto [dr, dc] : kNeighbourOffsets) {
                const int q = grid.id(p.row + dr, p.col + dc);
                if (q >= 0 && !seen[static_cast<std::size_t>(q)]) {
                    seen[static_cast<std::size_t>(q)] = 1;
                    ++reached;
                    stack.push_back(q);
                }
            }
        }
        if (reached != n) {
            const auto other = std::find(seen.begin(), seen.end(), 0) - seen.begin();
            throw Error(ErrorCode::AmbiguousTopology,
                        "border has more than one connected component; " + describe(members.front()) +
                            " and " + describe(members[static_cast<std::size_t>(other)]) + " are not connected");
        }
    }

    // members[0] is the topmost-then-leftmost pixel.
    std::vector<char> visited(n, 0);
    OrderedBorder out;
    out.pixels.reserve(n);
    int current = 0;
    visited[0] = 1;
    out.pixels.push_back(members[0]);
    for (std::size_t step = 1; step < n; ++step) {
        const Pixel p = members[static_cast<std::size_t>(current)];
        int best = -1;
        int best_d2 = std::numeric_limits<int>::max();
        int ties = 0;
        for (auto [dr, dc] : kNeighbourOffsets) {
            const int q = grid.id(p.row + dr, p.col + dc);
            if (q < 0 || visited[static_cast<std::size_t>(q)]) continue;
            const int d2 = dr * dr + dc * dc;
            if (d2 < best_d2) {
                best = q;
                best_d2 = d2;
                ties = 1;
            } else if (d2 == best_d2) {
                ++ties;
            }
        }
        if (best < 0)
            throw Error(ErrorCode::AmbiguousTopology, "border chain dead-ends at " + describe(p) + " with " +
                                                          std::to_string(n - step) + " pixels unvisited");
        // The start pixel legitimately has two equidistant chain-neighbours.
        if (ties > 1 && step > 1)
            throw Error(ErrorCode::AmbiguousTopology, "junction at " + describe(p) + ": " + std::to_string(ties) +
                                                          " unvisited pixels at equal minimal distance");
        visited[static_cast<std::size_t>(best)] = 1;
        out.pixels.push_back(members[static_cast<std::size_t>(best)]);
        current = best;
    }
    const Pixel first = out.pixels.front();
    const Pixel last = out.pixels.back();
    out.closed = n >= 4 && std::abs(first.row - last.row) <= 1 && std::abs(first.col - last.col) <= 1;
    return out;
}

ProfileCurve to_axial_section(std::span<const Pixel> ordered, double scale, int axis_column, int bitmap_height,
                              bool closed) {
    if (!(scale > 0.0)) throw Error(ErrorCode::InvalidInput, "scale must be positive");
    ProfileCurve curve;
    curve.scale = scale;
    curve.closed = closed;
    curve.points.reserve(ordered.size());
    for (const Pixel& p : ordered) {
        if (p.col < axis_column)
            throw Error(ErrorCode::AxisCrossing, "pixel " + describe(p) + " lies left of axis column " +
                                                     std::to_string(axis_column));
        curve.points.push_back({(p.col - axis_column) * scale, (bitmap_height - p.row) * scale});
    }
    return curve;
}

ProfileCurve smooth_profile(const ProfileCurve& curve, int window) {
    const int n = static_cast<int>(curve.points.size());
    if (window <= 0 || window % 2 == 0)
        throw Error(ErrorCode::InvalidWindow, "smoothing window must be odd and positive, got " + std::to_string(window));
    if (window > n)
        throw Error(ErrorCode::InvalidWindow, "smoothing window " + std::to_string(window) + " exceeds point count " +
                                                  std::to_string(n));
    if (window == 1) return curve;
    const int half = window / 2;
    ProfileCurve out = curve;
    for (int k = 0; k < n; ++k) {
        double r = 0.0, h = 0.0;
        int count = 0;
        if (curve.closed) {
            for (int o = -half; o <= half; ++o) {
                const auto& p = curve.points[static_cast<std::size_t>(((k + o) % n + n) % n)];
                r += p.radius;
                h += p.height;
                ++count;
            }
        } else {
            const int m = std::min({half, k, n - 1 - k});
            for (int o = -m; o <= m; ++o) {
                const auto& p = curve.points[static_cast<std::size_t>(k + o)];
                r += p.radius;
                h += p.height;
                ++count;
            }
        }
        out.points[static_cast<std::size_t>(k)] = {r / count, h / count};
    }
    return out;
}

ProfileCurve jitter_profile(const ProfileCurve& curve, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) throw Error(ErrorCode::InvalidInput, "jitter sigma must be non-negative");
    if (sigma == 0.0) return curve;
    Rng rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    ProfileCurve out = curve;
    for (auto& p : out.points) {
        p.radius = std::max(0.0, p.radius + noise(rng));
        p.height += noise(rng);
    }
    return out;
}

void validate(const ProfileCurve& curve) {
    if (curve.points.size() < 3)
        throw Error(ErrorCode::InvalidInput, "profile needs at least 3 points, got " + std::to_string(curve.points.size()));
    for (std::size_t k = 0; k < curve.points.size(); ++k) {
        const auto& p = curve.points[k];
        if (!std::isfinite(p.radius) || !std::isfinite(p.height) || p.radius < 0.0)
            throw Error(ErrorCode::InvalidInput, "profile point " + std::to_string(k) + " is invalid");
        if (k > 0 && p == curve.points[k - 1])
            throw Error(ErrorCode::InvalidInput, "profile points " + std::to_string(k - 1) + " and " +
                                                     std::to_string(k) + " coincide");
    }
}

ProfileCurve decimate(const ProfileCurve& curve, int stride) {
    if (stride < 1) throw Error(ErrorCode::InvalidInput, "decimation stride must be >= 1");
    if (stride == 1) return curve;
    ProfileCurve out = curve;
    out.points.clear();
    for (std::size_t k = 0; k < curve.points.size(); k += static_cast<std::size_t>(stride))
        out.points.push_back(curve.points[k]);
    // Open curves keep their end point so the rim is not lost.
    if (!curve.closed && (curve.points.size() - 1) % static_cast<std::size_t>(stride) != 0)
        out.points.push_back(curve.points.back());
    return out;
}

ProfileCurve extract_profile(const Bitmap& bitmap, const ExtractOptions& options) {
    const BorderSet border = detect_border(bitmap);
    if (border.empty()) throw Error(ErrorCode::InvalidInput, "drawing contains no profile pixels");
    const OrderedBorder ordered = order_border(border);
    int axis = 0;
    if (options.axis_column) {
        axis = *options.axis_column;
    } else {
        axis = std::min_element(border.begin(), border.end(), [](Pixel a, Pixel b) { return a.col < b.col; })->col;
    }
    ProfileCurve curve = to_axial_section(ordered.pixels, options.scale, axis, bitmap.height(), ordered.closed);
    curve = smooth_profile(curve, options.smooth_window);
    validate(curve);
    return curve;
}

void write_csv(const ProfileCurve& curve, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << "radius,height\n" << std::setprecision(17);
    for (const auto& p : curve.points) out << p.radius << ',' << p.height << '\n';
    if (curve.closed && !curve.points.empty())
        out << curve.points.front().radius << ',' << curve.points.front().height << '\n';
}

ProfileCurve read_csv(const std::filesystem::path& path, double scale) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    std::string line;
    std::getline(in, line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "radius,height") throw Error(ErrorCode::InvalidInput, path.string() + ": expected header radius,height");
    ProfileCurve curve;
    curve.scale = scale;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw Error(ErrorCode::InvalidInput, path.string() + ":" + std::to_string(lineno) + ": expected two fields");
        try {
            curve.points.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidInput, path.string() + ":" + std::to_string(lineno) + ": bad number");
        }
    }
    if (curve.points.size() >= 4 && curve.points.front() == curve.points.back()) {
        curve.points.pop_back();
        curve.closed = true;
    }
    return curve;
}

}  // namespace potsynth::profile
