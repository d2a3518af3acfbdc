#pragma once

#include "potsynth/dataset.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace potsynth::metrics {

struct PredictionRow {
    int split_id = 0;
    std::string photo_id;
    std::string vessel_id;
    std::string true_class;
    std::string predicted_class;
};

/// predictions.csv: split_id,photo_id,vessel_id,true_class,predicted_class
std::vector<PredictionRow> read_predictions_csv(const std::filesystem::path& path);
void write_predictions_csv(const std::vector<PredictionRow>& rows, const std::filesystem::path& path);

/// Test-time class probabilities.
using Prior = std::map<std::string, double>;

Prior uniform_prior(const std::vector<std::string>& classes);

/// Per-row sampling weight (1/n_photos_gv)(1/n_pots_g) P(G=g) for the rows of one split.
/// Photo and vessel counts come from the rows themselves.
/// Throws EmptyClassInTest when a class with positive prior mass has no rows,
/// UnknownClass when a row's true class is not covered by the prior.
std::vector<double> weights(const std::vector<PredictionRow>& rows, const Prior& prior);

/// Sum of weights over correctly predicted rows. Throws MisalignedInputs on size mismatch.
double acc_single(const std::vector<PredictionRow>& rows, const std::vector<double>& weights);

/// Rows grouped by split id, ascending.
std::map<int, std::vector<PredictionRow>> by_split(const std::vector<PredictionRow>& rows);

struct Aggregate {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;  // Bessel corrected
    double sigma = 0.0;
    double two_sigma_bootstrap = 0.0;
    double min = 0.0;
    double max = 0.0;
};

inline constexpr int kBootstrapResamples = 10000;
inline constexpr std::uint64_t kBootstrapSeed = 0x5eed'b007ULL;

/// Throws TooFewSplits for fewer than two values.
Aggregate aggregate(const std::vector<double>& values, std::uint64_t seed = kBootstrapSeed,
                    int resamples = kBootstrapResamples);

/// Per-row weight without prior factor: (1/n_photos_gv)(1/n_pots_g).
std::vector<double> class_conditional_weights(const std::vector<PredictionRow>& rows);

struct ConfusionMatrix {
    std::vector<std::string> classes;
    std::vector<std::vector<double>> m;  // m[true][predicted]
    std::vector<int> splits_present;     // splits in which the true class had test rows
    bool populated(std::size_t i) const { return splits_present[i] > 0; }
};

/// Averaged over the splits in which each true class is present, so
/// populated rows sum to one. Throws UnknownClass for labels outside `classes`.
ConfusionMatrix confusion(const std::vector<PredictionRow>& rows, const std::vector<std::string>& classes);

struct Flag {
    std::size_t i = 0;
    std::size_t j = 0;
    double value = 0.0;
    double threshold = 0.0;
};

double major_confusion_threshold(double diagonal, std::size_t n_classes);
/// Cells with m_ij > 2(1 - m_ii)/(K - 1), i != j.
std::vector<Flag> major_confusions(const std::vector<std::vector<double>>& m);

enum class Grouping { Damaged, ViewLabel, Class };
std::optional<Grouping> parse_grouping(std::string_view text);
std::string_view to_string(Grouping g);

struct ClassSubgroupStats {
    bool absent = true;
    double accuracy = 0.0;        // mean over splits where present
    double mean_vessels = 0.0;    // mean subgroup vessel count per split
    int splits_present = 0;
};

struct SubgroupResult {
    std::string group;
    std::map<std::string, ClassSubgroupStats> classes;
    /// Per split: class accuracies weighted by subgroup vessel counts.
    std::vector<double> overall_per_split;
    double overall = 0.0;
};

struct SubgroupReport {
    Grouping grouping = Grouping::Damaged;
    std::vector<SubgroupResult> groups;
};

SubgroupReport subgroup_report(const std::vector<PredictionRow>& rows, const dataset::Catalog& catalog,
                               Grouping grouping, const std::vector<std::string>& classes);

/// 2 sqrt(2 (h ln(2eN/h) + ln(2/delta)) / N)
double risk_bound(double h, double delta, double n);

struct SampleSize {
    std::uint64_t n = 0;
    double bound = 0.0;
};

/// First N at which the bound drops to `gap`, searched over the region where
/// the bound decreases in N. Throws NoSolution past 2^63, InvalidInput on bad arguments.
SampleSize min_train_size(double h, double delta, double gap);
/// Start of the decreasing regime, at least 1.
std::uint64_t decreasing_regime_start(double h, double delta);

enum class PriorKind { Uniform, Mol };
std::string_view to_string(PriorKind p);

/// Catalog/split consistency checks. Throws InvalidInput naming the offending row.
void validate_predictions(const std::vector<PredictionRow>& rows, const dataset::Catalog& catalog,
                          const dataset::SplitPlan* splits);

struct PriorResult {
    PriorKind prior = PriorKind::Uniform;
    std::vector<std::pair<int, double>> per_split;
    Aggregate stats;
};

struct ConfigurationReport {
    std::string name;
    std::vector<PriorResult> priors;
    ConfusionMatrix confusion;
    std::vector<Flag> flags;
    std::vector<SubgroupReport> subgroups;
};

struct EvalReport {
    std::vector<ConfigurationReport> configurations;
    std::optional<std::string> reference;  // reality-gap baseline
};

struct EvalOptions {
    std::vector<PriorKind> priors{PriorKind::Uniform};
    std::optional<std::string> reference;
    std::uint64_t bootstrap_seed = kBootstrapSeed;
};

EvalReport evaluate(const std::vector<std::pair<std::string, std::vector<PredictionRow>>>& configurations,
                    const dataset::Catalog& catalog, const dataset::SplitPlan* splits, const EvalOptions& options);

nlohmann::json to_json(const EvalReport& report);
std::string to_text(const EvalReport& report);

}  // namespace potsynth::metrics
