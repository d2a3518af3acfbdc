#pragma once

#include "potsynth/labels.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace potsynth::dataset {

/// Map a Dragendorff form ("18", "18-31R", "Dr33", ...) to its class label.
/// Rouletted variants join their plain form; 18, 18-31 and 31 form Dr18.
/// Throws UnknownForm otherwise.
std::string aggregate_class(std::string_view raw_form);

struct Photo {
    std::string photo_id;
    ViewLabel view = ViewLabel::Standard;
};

struct VesselRecord {
    std::string vessel_id;
    std::string raw_form;
    std::string class_label;
    bool damaged = false;
    std::vector<Photo> photos;
};

class Catalog {
public:
    Catalog() = default;
    explicit Catalog(std::vector<VesselRecord> vessels);

    const std::vector<VesselRecord>& vessels() const noexcept { return vessels_; }
    const VesselRecord* find_vessel(std::string_view vessel_id) const;
    /// Photo of `vessel_id`, or nullptr.
    const Photo* find_photo(std::string_view vessel_id, std::string_view photo_id) const;

    /// Vessel ids per class label, in catalog order.
    std::map<std::string, std::vector<std::string>> vessels_by_class() const;

private:
    std::vector<VesselRecord> vessels_;
    std::map<std::string, std::size_t, std::less<>> vessel_index_;
    std::map<std::pair<std::string, std::string>, std::size_t> photo_index_;
};

/// catalog.csv: photo_id,vessel_id,raw_form,view_label,damaged (one row per photo).
Catalog read_catalog_csv(const std::filesystem::path& path);
void write_catalog_csv(const Catalog& catalog, const std::filesystem::path& path);

struct ClassSplit {
    std::vector<std::string> train;
    std::vector<std::string> validation;
    std::vector<std::string> test;
};

struct Split {
    std::map<std::string, ClassSplit> classes;
};

struct SplitPlan {
    std::uint64_t seed = 0;
    int n_train = 4;
    int n_validation = 2;
    std::vector<Split> splits;
};

inline constexpr int kNumSplits = 20;

/// Independent partitions: per split and class, `n_train` then
/// `n_validation` vessels drawn without replacement, the rest to test.
/// Throws InsufficientVessels if some class cannot leave a test vessel.
SplitPlan make_splits(const Catalog& catalog, std::uint64_t seed, int n_splits = kNumSplits, int n_train = 4,
                      int n_validation = 2);

nlohmann::json to_json(const SplitPlan& plan);
SplitPlan splits_from_json(const nlohmann::json& j);

/// Share of catalog vessels in each class.
std::map<std::string, double> mol_prior(const Catalog& catalog);

/// Training settings for external trainers.
nlohmann::json experiment_config();

}  // namespace potsynth::dataset
