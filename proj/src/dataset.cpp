#include "potsynth/dataset.hpp"

#include "potsynth/classes.hpp"
#include "potsynth/error.hpp"
#include "potsynth/rng.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace potsynth::dataset {

namespace fs = std::filesystem;

std::string aggregate_class(std::string_view raw_form) {
    std::string form(raw_form);
    form.erase(std::remove_if(form.begin(), form.end(), [](unsigned char c) { return std::isspace(c); }), form.end());
    if (form.size() > 2 && (form[0] == 'D' || form[0] == 'd') && (form[1] == 'r' || form[1] == 'R'))
        form = form.substr(2);
    if (!form.empty() && (form.back() == 'R' || form.back() == 'r')) form.pop_back();
    if (form == "18" || form == "18-31" || form == "31") return "Dr18";
    const std::string label = "Dr" + form;
    if (class_index(label)) return label;
    throw Error(ErrorCode::UnknownForm, "unknown Dragendorff form '" + std::string(raw_form) + "'");
}

Catalog::Catalog(std::vector<VesselRecord> vessels) : vessels_(std::move(vessels)) {
    for (std::size_t v = 0; v < vessels_.size(); ++v) {
        const auto& rec = vessels_[v];
        if (rec.photos.empty()) throw Error(ErrorCode::InvalidInput, "vessel " + rec.vessel_id + " has no photos");
        if (!vessel_index_.emplace(rec.vessel_id, v).second)
            throw Error(ErrorCode::InvalidInput, "duplicate vessel id " + rec.vessel_id);
        for (std::size_t p = 0; p < rec.photos.size(); ++p)
            if (!photo_index_.emplace(std::pair{rec.vessel_id, rec.photos[p].photo_id}, p).second)
                throw Error(ErrorCode::InvalidInput, "duplicate photo " + rec.photos[p].photo_id);
    }
}

const VesselRecord* Catalog::find_vessel(std::string_view vessel_id) const {
    const auto it = vessel_index_.find(vessel_id);
    return it == vessel_index_.end() ? nullptr : &vessels_[it->second];
}

const Photo* Catalog::find_photo(std::string_view vessel_id, std::string_view photo_id) const {
    const auto it = photo_index_.find({std::string(vessel_id), std::string(photo_id)});
    if (it == photo_index_.end()) return nullptr;
    return &find_vessel(vessel_id)->photos[it->second];
}

std::map<std::string, std::vector<std::string>> Catalog::vessels_by_class() const {
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& v : vessels_) out[v.class_label].push_back(v.vessel_id);
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (!cell.empty() && cell.back() == '\r') cell.pop_back();
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

bool parse_bool(const std::string& s) {
    if (s == "1" || s == "true" || s == "yes" || s == "damaged") return true;
    if (s == "0" || s == "false" || s == "no" || s.empty()) return false;
    throw Error(ErrorCode::InvalidInput, "bad boolean '" + s + "'");
}

}  // namespace

Catalog read_catalog_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    std::string line;
    std::getline(in, line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "photo_id,vessel_id,raw_form,view_label,damaged")
        throw Error(ErrorCode::InvalidInput, path.string() + ": expected header photo_id,vessel_id,raw_form,view_label,damaged");
    std::vector<VesselRecord> vessels;
    std::map<std::string, std::size_t> index;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto f = split_csv_line(line);
        const std::string where = path.string() + ":" + std::to_string(lineno);
        if (f.size() != 5) throw Error(ErrorCode::InvalidInput, where + ": expected 5 fields");
        const auto view = parse_view_label(f[3]);
        if (!view) throw Error(ErrorCode::InvalidInput, where + ": bad view label '" + f[3] + "'");
        const bool damaged = parse_bool(f[4]);
        auto [it, inserted] = index.emplace(f[1], vessels.size());
        if (inserted) {
            VesselRecord rec;
            rec.vessel_id = f[1];
            rec.raw_form = f[2];
            rec.class_label = aggregate_class(f[2]);
            rec.damaged = damaged;
            vessels.push_back(std::move(rec));
        } else {
            const auto& rec = vessels[it->second];
            if (aggregate_class(f[2]) != rec.class_label || damaged != rec.damaged)
                throw Error(ErrorCode::InvalidInput, where + ": vessel " + f[1] + " has inconsistent form or damage");
        }
        vessels[it->second].photos.push_back({f[0], *view});
    }
    return Catalog(std::move(vessels));
}

void write_catalog_csv(const Catalog& catalog, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << "photo_id,vessel_id,raw_form,view_label,damaged\n";
    for (const auto& v : catalog.vessels())
        for (const auto& p : v.photos)
            out << p.photo_id << ',' << v.vessel_id << ',' << v.raw_form << ',' << to_string(p.view) << ','
                << (v.damaged ? 1 : 0) << '\n';
}

SplitPlan make_splits(const Catalog& catalog, std::uint64_t seed, int n_splits, int n_train, int n_validation) {
    if (n_splits < 1 || n_train < 0 || n_validation < 0)
        throw Error(ErrorCode::InvalidInput, "split counts must be non-negative and n_splits >= 1");
    const auto by_class = catalog.vessels_by_class();
    for (const auto& [label, ids] : by_class)
        if (static_cast<int>(ids.size()) < n_train + n_validation + 1)
            throw Error(ErrorCode::InsufficientVessels, "class " + label + " has " + std::to_string(ids.size()) +
                                                            " vessels; needs at least " +
                                                            std::to_string(n_train + n_validation + 1));
    SplitPlan plan;
    plan.seed = seed;
    plan.n_train = n_train;
    plan.n_validation = n_validation;
    for (int s = 0; s < n_splits; ++s) {
        Split split;
        for (const auto& [label, ids] : by_class) {
            const std::size_t ci = require_class_index(label);
            Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(s), ci}));
            std::vector<std::size_t> order(ids.size());
            for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
            const auto picks = static_cast<std::size_t>(n_train + n_validation);
            for (std::size_t k = 0; k < picks; ++k) {
                const auto j = static_cast<std::size_t>(uniform_int(rng, static_cast<long long>(k),
                                                                    static_cast<long long>(order.size()) - 1));
                std::swap(order[k], order[j]);
            }
            ClassSplit cs;
            for (std::size_t k = 0; k < static_cast<std::size_t>(n_train); ++k) cs.train.push_back(ids[order[k]]);
            for (std::size_t k = static_cast<std::size_t>(n_train); k < picks; ++k)
                cs.validation.push_back(ids[order[k]]);
            std::vector<std::size_t> rest(order.begin() + static_cast<std::ptrdiff_t>(picks), order.end());
            std::sort(rest.begin(), rest.end());
            for (auto k : rest) cs.test.push_back(ids[k]);
            split.classes.emplace(label, std::move(cs));
        }
        plan.splits.push_back(std::move(split));
    }
    return plan;
}

nlohmann::json to_json(const SplitPlan& plan) {
    nlohmann::json j;
    j["seed"] = plan.seed;
    j["n_splits"] = plan.splits.size();
    j["n_train"] = plan.n_train;
    j["n_validation"] = plan.n_validation;
    j["splits"] = nlohmann::json::array();
    for (std::size_t s = 0; s < plan.splits.size(); ++s) {
        nlohmann::json js;
        js["split_id"] = s;
        for (const auto& [label, cs] : plan.splits[s].classes)
            js["classes"][label] = {{"train", cs.train}, {"validation", cs.validation}, {"test", cs.test}};
        j["splits"].push_back(std::move(js));
    }
    return j;
}

SplitPlan splits_from_json(const nlohmann::json& j) {
    try {
        SplitPlan plan;
        plan.seed = j.at("seed").get<std::uint64_t>();
        plan.n_train = j.value("n_train", 4);
        plan.n_validation = j.value("n_validation", 2);
        for (const auto& js : j.at("splits")) {
            Split split;
            for (const auto& [label, cs] : js.at("classes").items())
                split.classes[label] = {cs.at("train").get<std::vector<std::string>>(),
                                        cs.at("validation").get<std::vector<std::string>>(),
                                        cs.at("test").get<std::vector<std::string>>()};
            plan.splits.push_back(std::move(split));
        }
        return plan;
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::InvalidInput, std::string("malformed splits file: ") + ex.what());
    }
}

std::map<std::string, double> mol_prior(const Catalog& catalog) {
    if (catalog.vessels().empty()) throw Error(ErrorCode::InvalidInput, "empty catalog");
    std::map<std::string, double> prior;
    for (const auto& v : catalog.vessels()) prior[v.class_label] += 1.0;
    const double total = static_cast<double>(catalog.vessels().size());
    for (auto& [label, p] : prior) p /= total;
    return prior;
}

nlohmann::json experiment_config() {
    return {
        {"classes", kClassLabels},
        {"architectures",
         {{{"name", "inception_v3"}, {"input_size", 299}, {"learning_rate", 5e-5}},
          {{"name", "resnet50_v2"}, {"input_size", 224}, {"learning_rate", 5e-5}},
          {{"name", "mobilenet_v2"}, {"input_size", 224}, {"learning_rate", 5e-5}},
          {{"name", "vgg19"}, {"input_size", 224}, {"learning_rate", 5e-6}}}},
        {"head", {{"pooling", "global_average"}, {"dropout", 0.3}, {"dense_units", kNumClasses}, {"activation", "softmax"}}},
        {"initial_weights", "imagenet"},
        {"pretraining_datasets", {"imagenet", "matplotlib", "blender1", "blender2"}},
        {"optimizer", "adam"},
        {"loss", "categorical_crossentropy"},
        {"trainable_layers", "all"},
        {"batch_size", 8},
        {"early_stopping", {{"monitor", "val_categorical_crossentropy"}, {"patience", 10}, {"restore_best", true}}},
        {"prediction_rule", "argmax, ties to the lowest class index"},
        {"n_splits", kNumSplits},
        {"vessels_per_class", {{"train", 4}, {"validation", 2}}},
    };
}

}  // namespace potsynth::dataset
