#include "potsynth/metrics.hpp"

#include "potsynth/classes.hpp"
#include "potsynth/error.hpp"
#include "potsynth/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace potsynth::metrics {

namespace fs = std::filesystem;

namespace {

constexpr const char* kPredictionsHeader = "split_id,photo_id,vessel_id,true_class,predicted_class";

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::size_t index_of(const std::vector<std::string>& classes, const std::string& label) {
    const auto it = std::find(classes.begin(), classes.end(), label);
    if (it == classes.end()) throw Error(ErrorCode::UnknownClass, "class '" + label + "' is not evaluated");
    return static_cast<std::size_t>(it - classes.begin());
}

struct Counts {
    std::map<std::pair<std::string, std::string>, int> photos;  // (class, vessel)
    std::map<std::string, int> pots;
};

Counts count(const std::vector<PredictionRow>& rows) {
    Counts c;
    for (const auto& r : rows)
        if (c.photos[{r.true_class, r.vessel_id}]++ == 0) ++c.pots[r.true_class];
    return c;
}

}  // namespace

std::vector<PredictionRow> read_predictions_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    std::string line;
    std::getline(in, line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kPredictionsHeader)
        throw Error(ErrorCode::InvalidInput, path.string() + ": expected header " + kPredictionsHeader);
    std::vector<PredictionRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_fields(line);
        const std::string where = path.string() + ":" + std::to_string(lineno);
        if (f.size() != 5) throw Error(ErrorCode::InvalidInput, where + ": expected 5 fields");
        PredictionRow r;
        try {
            std::size_t used = 0;
            r.split_id = std::stoi(f[0], &used);
            if (used != f[0].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidInput, where + ": bad split_id '" + f[0] + "'");
        }
        r.photo_id = f[1];
        r.vessel_id = f[2];
        r.true_class = f[3];
        r.predicted_class = f[4];
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_predictions_csv(const std::vector<PredictionRow>& rows, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << kPredictionsHeader << '\n';
    for (const auto& r : rows)
        out << r.split_id << ',' << r.photo_id << ',' << r.vessel_id << ',' << r.true_class << ','
            << r.predicted_class << '\n';
}

Prior uniform_prior(const std::vector<std::string>& classes) {
    if (classes.empty()) throw Error(ErrorCode::InvalidInput, "no classes");
    Prior p;
    for (const auto& c : classes) p[c] = 1.0 / static_cast<double>(classes.size());
    return p;
}

std::vector<double> weights(const std::vector<PredictionRow>& rows, const Prior& prior) {
    const Counts c = count(rows);
    for (const auto& [label, mass] : prior)
        if (mass > 0.0 && c.pots.find(label) == c.pots.end())
            throw Error(ErrorCode::EmptyClassInTest, "class " + label + " has no test vessels");
    std::vector<double> w;
    w.reserve(rows.size());
    for (const auto& r : rows) {
        const auto it = prior.find(r.true_class);
        if (it == prior.end()) throw Error(ErrorCode::UnknownClass, "class '" + r.true_class + "' not in prior");
        w.push_back(it->second / (c.photos.at({r.true_class, r.vessel_id}) * c.pots.at(r.true_class)));
    }
    return w;
}

double acc_single(const std::vector<PredictionRow>& rows, const std::vector<double>& w) {
    if (rows.size() != w.size())
        throw Error(ErrorCode::MisalignedInputs, "got " + std::to_string(rows.size()) + " rows and " +
                                                     std::to_string(w.size()) + " weights");
    double acc = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k)
        if (rows[k].true_class == rows[k].predicted_class) acc += w[k];
    return acc;
}

std::map<int, std::vector<PredictionRow>> by_split(const std::vector<PredictionRow>& rows) {
    std::map<int, std::vector<PredictionRow>> out;
    for (const auto& r : rows) out[r.split_id].push_back(r);
    return out;
}

Aggregate aggregate(const std::vector<double>& values, std::uint64_t seed, int resamples) {
    if (values.size() < 2)
        throw Error(ErrorCode::TooFewSplits, "need at least 2 splits, got " + std::to_string(values.size()));
    if (resamples < 2) throw Error(ErrorCode::InvalidInput, "need at least 2 bootstrap resamples");
    Aggregate a;
    a.n = values.size();
    const double n = static_cast<double>(a.n);
    a.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double residual = 0.0;
    for (double v : values) residual += v - a.mean;
    a.mean += residual / n;
    double ss = 0.0;
    for (double v : values) ss += (v - a.mean) * (v - a.mean);
    a.variance = ss / (n - 1.0);
    a.sigma = std::sqrt(a.variance);
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    a.min = *lo;
    a.max = *hi;

    if (a.min == a.max) {
        a.mean = a.min;
        a.variance = a.sigma = 0.0;
        return a;
    }

    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, a.n - 1);
    std::vector<double> means(static_cast<std::size_t>(resamples));
    for (auto& m : means) {
        double s = 0.0;
        for (std::size_t k = 0; k < a.n; ++k) s += values[pick(rng)];
        m = s / n;
    }
    const double mm = std::accumulate(means.begin(), means.end(), 0.0) / resamples;
    double bs = 0.0;
    for (double m : means) bs += (m - mm) * (m - mm);
    a.two_sigma_bootstrap = 2.0 * std::sqrt(bs / (resamples - 1));
    return a;
}

std::vector<double> class_conditional_weights(const std::vector<PredictionRow>& rows) {
    const Counts c = count(rows);
    std::vector<double> w;
    w.reserve(rows.size());
    for (const auto& r : rows)
        w.push_back(1.0 / (c.photos.at({r.true_class, r.vessel_id}) * c.pots.at(r.true_class)));
    return w;
}

ConfusionMatrix confusion(const std::vector<PredictionRow>& rows, const std::vector<std::string>& classes) {
    const std::size_t k = classes.size();
    ConfusionMatrix cm;
    cm.classes = classes;
    cm.m.assign(k, std::vector<double>(k, 0.0));
    cm.splits_present.assign(k, 0);
    for (const auto& [id, split_rows] : by_split(rows)) {
        const auto w = class_conditional_weights(split_rows);
        std::vector<bool> present(k, false);
        for (std::size_t r = 0; r < split_rows.size(); ++r) {
            const auto i = index_of(classes, split_rows[r].true_class);
            const auto j = index_of(classes, split_rows[r].predicted_class);
            cm.m[i][j] += w[r];
            present[i] = true;
        }
        for (std::size_t i = 0; i < k; ++i) cm.splits_present[i] += present[i] ? 1 : 0;
    }
    for (std::size_t i = 0; i < k; ++i)
        if (cm.splits_present[i] > 0)
            for (auto& v : cm.m[i]) v /= cm.splits_present[i];
    return cm;
}

double major_confusion_threshold(double diagonal, std::size_t n_classes) {
    if (n_classes < 2) throw Error(ErrorCode::InvalidInput, "need at least 2 classes");
    // a diagonal a rounding error above 1 must not turn exact zeros into flags
    return std::max(0.0, 2.0 * (1.0 - diagonal) / static_cast<double>(n_classes - 1));
}

std::vector<Flag> major_confusions(const std::vector<std::vector<double>>& m) {
    const std::size_t k = m.size();
    for (const auto& row : m)
        if (row.size() != k) throw Error(ErrorCode::InvalidInput, "confusion matrix is not square");
    std::vector<Flag> flags;
    if (k < 2) return flags;
    for (std::size_t i = 0; i < k; ++i) {
        const double t = major_confusion_threshold(m[i][i], k);
        for (std::size_t j = 0; j < k; ++j)
            if (i != j && m[i][j] > t) flags.push_back({i, j, m[i][j], t});
    }
    return flags;
}

std::optional<Grouping> parse_grouping(std::string_view text) {
    if (text == "damaged") return Grouping::Damaged;
    if (text == "view_label" || text == "view") return Grouping::ViewLabel;
    if (text == "class") return Grouping::Class;
    return std::nullopt;
}

std::string_view to_string(Grouping g) {
    switch (g) {
        case Grouping::Damaged: return "damaged";
        case Grouping::ViewLabel: return "view_label";
        case Grouping::Class: return "class";
    }
    return "?";
}

std::string_view to_string(PriorKind p) { return p == PriorKind::Uniform ? "uniform" : "mol"; }

SubgroupReport subgroup_report(const std::vector<PredictionRow>& rows, const dataset::Catalog& catalog,
                               Grouping grouping, const std::vector<std::string>& classes) {
    auto group_of = [&](const PredictionRow& r) -> std::string {
        const auto* v = catalog.find_vessel(r.vessel_id);
        if (v == nullptr) throw Error(ErrorCode::InvalidInput, "vessel " + r.vessel_id + " not in catalog");
        switch (grouping) {
            case Grouping::Damaged: return v->damaged ? "damaged" : "undamaged";
            case Grouping::ViewLabel: {
                const auto* p = catalog.find_photo(r.vessel_id, r.photo_id);
                if (p == nullptr) throw Error(ErrorCode::InvalidInput, "photo " + r.photo_id + " not in catalog");
                return std::string(to_string(p->view));
            }
            case Grouping::Class: return r.true_class;
        }
        return {};
    };
    std::vector<std::string> names;
    if (grouping == Grouping::Damaged) names = {"damaged", "undamaged"};
    else if (grouping == Grouping::ViewLabel) names = {"standard", "zenith", "flipped"};
    else names = classes;

    const auto splits = by_split(rows);
    SubgroupReport report;
    report.grouping = grouping;
    for (const auto& name : names) {
        SubgroupResult res;
        res.group = name;
        std::map<std::string, double> acc_sum;
        std::map<std::string, double> vessel_sum;
        for (const auto& c : classes) res.classes[c] = {};
        for (const auto& [id, split_rows] : splits) {
            std::vector<PredictionRow> sub;
            for (const auto& r : split_rows)
                if (group_of(r) == name) sub.push_back(r);
            if (sub.empty()) continue;
            const auto w = class_conditional_weights(sub);
            const Counts c = count(sub);
            std::map<std::string, double> acc;
            for (std::size_t k = 0; k < sub.size(); ++k)
                if (sub[k].true_class == sub[k].predicted_class) acc[sub[k].true_class] += w[k];
            double weighted = 0.0;
            double total = 0.0;
            for (const auto& [label, pots] : c.pots) {
                auto it = res.classes.find(label);
                if (it == res.classes.end()) throw Error(ErrorCode::UnknownClass, "class '" + label + "' not evaluated");
                const double a = acc[label];
                acc_sum[label] += a;
                vessel_sum[label] += pots;
                ++it->second.splits_present;
                weighted += pots * a;
                total += pots;
            }
            res.overall_per_split.push_back(weighted / total);
        }
        const double n_splits = static_cast<double>(std::max<std::size_t>(splits.size(), 1));
        for (auto& [label, st] : res.classes) {
            st.absent = st.splits_present == 0;
            if (!st.absent) st.accuracy = acc_sum[label] / st.splits_present;
            st.mean_vessels = vessel_sum[label] / n_splits;
        }
        if (!res.overall_per_split.empty())
            res.overall = std::accumulate(res.overall_per_split.begin(), res.overall_per_split.end(), 0.0) /
                          static_cast<double>(res.overall_per_split.size());
        report.groups.push_back(std::move(res));
    }
    return report;
}

double risk_bound(double h, double delta, double n) {
    return 2.0 * std::sqrt(2.0 * (h * std::log(2.0 * std::exp(1.0) * n / h) + std::log(2.0 / delta)) / n);
}

namespace {

void check_bound_args(double h, double delta) {
    if (!(h >= 1.0) || !std::isfinite(h)) throw Error(ErrorCode::InvalidInput, "h must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::InvalidInput, "delta must lie in (0, 1)");
}

}  // namespace

std::uint64_t decreasing_regime_start(double h, double delta) {
    check_bound_args(h, delta);
    // d/dN of the bound's argument is negative iff N > (h/2) exp(-ln(2/delta)/h)
    const double start = std::ceil(0.5 * h * std::exp(-std::log(2.0 / delta) / h));
    if (!(start < 9.2e18)) throw Error(ErrorCode::NoSolution, "decreasing regime starts beyond 2^63");
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(start));
}

SampleSize min_train_size(double h, double delta, double gap) {
    check_bound_args(h, delta);
    if (!(gap > 0.0) || !std::isfinite(gap)) throw Error(ErrorCode::InvalidInput, "gap must be > 0");
    const std::uint64_t start = decreasing_regime_start(h, delta);
    auto ok = [&](std::uint64_t n) { return risk_bound(h, delta, static_cast<double>(n)) <= gap; };
    constexpr std::uint64_t kLimit = std::uint64_t{1} << 63;
    if (ok(start)) return {start, risk_bound(h, delta, static_cast<double>(start))};
    std::uint64_t lo = start;  // bound(lo) > gap
    std::uint64_t hi = start;
    while (!ok(hi)) {
        lo = hi;
        if (hi >= kLimit / 2) throw Error(ErrorCode::NoSolution, "bound stays above gap up to 2^63");
        hi *= 2;
    }
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (ok(mid)) hi = mid;
        else lo = mid;
    }
    return {hi, risk_bound(h, delta, static_cast<double>(hi))};
}

void validate_predictions(const std::vector<PredictionRow>& rows, const dataset::Catalog& catalog,
                          const dataset::SplitPlan* splits) {
    std::set<std::pair<int, std::string>> seen;
    for (const auto& r : rows) {
        const std::string where = "split " + std::to_string(r.split_id) + ", photo " + r.photo_id;
        if (!seen.emplace(r.split_id, r.photo_id).second)
            throw Error(ErrorCode::InvalidInput, where + ": duplicate prediction");
        const auto* v = catalog.find_vessel(r.vessel_id);
        if (v == nullptr) throw Error(ErrorCode::InvalidInput, where + ": vessel " + r.vessel_id + " not in catalog");
        if (catalog.find_photo(r.vessel_id, r.photo_id) == nullptr)
            throw Error(ErrorCode::InvalidInput, where + ": photo not in catalog for vessel " + r.vessel_id);
        if (v->class_label != r.true_class)
            throw Error(ErrorCode::InvalidInput,
                        where + ": true_class " + r.true_class + " disagrees with catalog class " + v->class_label);
        if (!class_index(r.predicted_class))
            throw Error(ErrorCode::UnknownClass, where + ": unknown predicted class '" + r.predicted_class + "'");
    }
    if (splits == nullptr) return;
    for (const auto& r : rows) {
        if (r.split_id < 0 || static_cast<std::size_t>(r.split_id) >= splits->splits.size())
            throw Error(ErrorCode::InvalidInput, "split id " + std::to_string(r.split_id) + " not in splits file");
        const auto& cls = splits->splits[static_cast<std::size_t>(r.split_id)].classes;
        const auto it = cls.find(r.true_class);
        if (it == cls.end() || std::find(it->second.test.begin(), it->second.test.end(), r.vessel_id) ==
                                   it->second.test.end())
            throw Error(ErrorCode::InvalidInput, "split " + std::to_string(r.split_id) + ": vessel " + r.vessel_id +
                                                     " is not in the test set");
    }
    std::set<int> split_ids;
    for (const auto& r : rows) split_ids.insert(r.split_id);
    for (int s : split_ids)
        for (const auto& [label, cs] : splits->splits[static_cast<std::size_t>(s)].classes)
            for (const auto& vid : cs.test) {
                const auto* v = catalog.find_vessel(vid);
                if (v == nullptr) throw Error(ErrorCode::InvalidInput, "split vessel " + vid + " not in catalog");
                for (const auto& p : v->photos)
                    if (!seen.count({s, p.photo_id}))
                        throw Error(ErrorCode::InvalidInput, "split " + std::to_string(s) + ": missing prediction for photo " +
                                                                 p.photo_id + " of vessel " + vid);
            }
}

EvalReport evaluate(const std::vector<std::pair<std::string, std::vector<PredictionRow>>>& configurations,
                    const dataset::Catalog& catalog, const dataset::SplitPlan* splits, const EvalOptions& options) {
    if (configurations.empty()) throw Error(ErrorCode::InvalidInput, "no prediction sets");
    std::vector<std::string> catalog_classes;
    const auto by_class = catalog.vessels_by_class();
    for (auto label : kClassLabels)
        if (by_class.count(std::string(label))) catalog_classes.emplace_back(label);
    const std::vector<std::string> all_classes(kClassLabels.begin(), kClassLabels.end());

    EvalReport report;
    report.reference = options.reference;
    if (options.reference) {
        const bool found = std::any_of(configurations.begin(), configurations.end(),
                                       [&](const auto& c) { return c.first == *options.reference; });
        if (!found) throw Error(ErrorCode::InvalidInput, "reference configuration '" + *options.reference + "' not given");
    }
    for (const auto& [name, rows] : configurations) {
        validate_predictions(rows, catalog, splits);
        ConfigurationReport cr;
        cr.name = name;
        const auto grouped = by_split(rows);
        for (PriorKind pk : options.priors) {
            const Prior prior = pk == PriorKind::Uniform ? uniform_prior(catalog_classes) : dataset::mol_prior(catalog);
            PriorResult pr;
            pr.prior = pk;
            std::vector<double> accs;
            for (const auto& [id, split_rows] : grouped) {
                try {
                    const double a = acc_single(split_rows, weights(split_rows, prior));
                    pr.per_split.emplace_back(id, a);
                    accs.push_back(a);
                } catch (const Error& e) {
                    throw Error(e.code(), name + ", split " + std::to_string(id) + ": " + e.what());
                }
            }
            pr.stats = aggregate(accs, options.bootstrap_seed);
            cr.priors.push_back(std::move(pr));
        }
        cr.confusion = confusion(rows, all_classes);
        const auto flags = major_confusions(cr.confusion.m);
        for (const auto& f : flags)
            if (cr.confusion.populated(f.i)) cr.flags.push_back(f);
        for (Grouping g : {Grouping::Damaged, Grouping::ViewLabel, Grouping::Class})
            cr.subgroups.push_back(subgroup_report(rows, catalog, g, catalog_classes));
        report.configurations.push_back(std::move(cr));
    }
    return report;
}

namespace {

nlohmann::json stats_json(const Aggregate& a) {
    return {{"n_splits", a.n},       {"mean", a.mean}, {"variance", a.variance},
            {"sigma", a.sigma},      {"two_sigma_bootstrap", a.two_sigma_bootstrap},
            {"min", a.min},          {"max", a.max}};
}

const PriorResult* find_prior(const ConfigurationReport& c, PriorKind p) {
    for (const auto& pr : c.priors)
        if (pr.prior == p) return &pr;
    return nullptr;
}

}  // namespace

nlohmann::json to_json(const EvalReport& report) {
    nlohmann::json j;
    j["configurations"] = nlohmann::json::array();
    const ConfigurationReport* ref = nullptr;
    if (report.reference)
        for (const auto& c : report.configurations)
            if (c.name == *report.reference) ref = &c;
    for (const auto& c : report.configurations) {
        nlohmann::json jc;
        jc["name"] = c.name;
        for (const auto& pr : c.priors) {
            nlohmann::json jp = stats_json(pr.stats);
            jp["per_split"] = nlohmann::json::array();
            for (const auto& [id, a] : pr.per_split) jp["per_split"].push_back({{"split_id", id}, {"accuracy", a}});
            if (ref != nullptr) {
                if (const auto* rp = find_prior(*ref, pr.prior)) jp["reality_gap"] = rp->stats.mean - pr.stats.mean;
            }
            jc["priors"][std::string(to_string(pr.prior))] = std::move(jp);
        }
        jc["confusion"]["classes"] = c.confusion.classes;
        jc["confusion"]["matrix"] = c.confusion.m;
        jc["confusion"]["splits_present"] = c.confusion.splits_present;
        jc["major_confusions"] = nlohmann::json::array();
        for (const auto& f : c.flags)
            jc["major_confusions"].push_back({{"true", c.confusion.classes[f.i]},
                                              {"predicted", c.confusion.classes[f.j]},
                                              {"value", f.value},
                                              {"threshold", f.threshold}});
        for (const auto& sg : c.subgroups) {
            nlohmann::json js = nlohmann::json::array();
            for (const auto& g : sg.groups) {
                nlohmann::json jg;
                jg["group"] = g.group;
                jg["overall"] = g.overall;
                for (const auto& [label, st] : g.classes) {
                    if (st.absent) jg["classes"][label] = {{"absent", true}, {"mean_vessels", 0.0}};
                    else
                        jg["classes"][label] = {{"absent", false},
                                                {"accuracy", st.accuracy},
                                                {"mean_vessels", st.mean_vessels},
                                                {"splits_present", st.splits_present}};
                }
                js.push_back(std::move(jg));
            }
            jc["subgroups"][std::string(to_string(sg.grouping))] = std::move(js);
        }
        j["configurations"].push_back(std::move(jc));
    }
    if (report.reference) j["reference"] = *report.reference;
    return j;
}

std::string to_text(const EvalReport& report) {
    std::ostringstream os;
    os << std::fixed;
    for (const auto& c : report.configurations) {
        os << "== " << c.name << " ==\n";
        os << std::left << std::setw(10) << "prior" << std::right << std::setw(10) << "acc" << std::setw(10)
           << "2sig" << std::setw(10) << "sigma" << std::setw(10) << "min" << std::setw(10) << "max" << '\n';
        for (const auto& pr : c.priors)
            os << std::left << std::setw(10) << to_string(pr.prior) << std::right << std::setprecision(4)
               << std::setw(10) << pr.stats.mean << std::setw(10) << pr.stats.two_sigma_bootstrap << std::setw(10)
               << pr.stats.sigma << std::setw(10) << pr.stats.min << std::setw(10) << pr.stats.max << '\n';
        os << "\nconfusion (%; rows true, columns predicted; * major confusion)\n" << std::setw(9) << "";
        for (const auto& name : c.confusion.classes) os << std::setw(9) << name;
        os << '\n';
        for (std::size_t i = 0; i < c.confusion.classes.size(); ++i) {
            os << std::left << std::setw(9) << c.confusion.classes[i] << std::right;
            for (std::size_t j = 0; j < c.confusion.classes.size(); ++j) {
                const bool flagged = std::any_of(c.flags.begin(), c.flags.end(),
                                                 [&](const Flag& f) { return f.i == i && f.j == j; });
                std::ostringstream cell;
                if (c.confusion.populated(i)) cell << std::lround(100.0 * c.confusion.m[i][j]) << (flagged ? "*" : "");
                else cell << "-";
                os << std::setw(9) << cell.str();
            }
            os << '\n';
        }
        for (const auto& sg : c.subgroups) {
            if (sg.grouping == Grouping::Class) continue;
            os << "\nby " << to_string(sg.grouping) << '\n' << std::left << std::setw(9) << "class" << std::right;
            for (const auto& g : sg.groups) os << std::setw(12) << g.group << std::setw(8) << "n";
            os << '\n';
            if (sg.groups.empty()) continue;
            for (const auto& [label, unused] : sg.groups.front().classes) {
                os << std::left << std::setw(9) << label << std::right;
                for (const auto& g : sg.groups) {
                    const auto& st = g.classes.at(label);
                    if (st.absent) os << std::setw(12) << "absent" << std::setw(8) << "0";
                    else
                        os << std::setprecision(4) << std::setw(12) << st.accuracy << std::setprecision(1)
                           << std::setw(8) << st.mean_vessels;
                }
                os << '\n';
            }
            os << std::left << std::setw(9) << "overall" << std::right;
            for (const auto& g : sg.groups) os << std::setprecision(4) << std::setw(12) << g.overall << std::setw(8) << "";
            os << '\n';
        }
        os << '\n';
    }
    if (report.reference) {
        const ConfigurationReport* ref = nullptr;
        for (const auto& c : report.configurations)
            if (c.name == *report.reference) ref = &c;
        os << "reality gap vs " << *report.reference << '\n';
        for (const auto& c : report.configurations) {
            if (&c == ref) continue;
            for (const auto& pr : c.priors)
                if (const auto* rp = find_prior(*ref, pr.prior))
                    os << "  " << c.name << " (" << to_string(pr.prior) << "): " << std::setprecision(4)
                       << rp->stats.mean - pr.stats.mean << '\n';
        }
    }
    return os.str();
}

}  // namespace potsynth::metrics
