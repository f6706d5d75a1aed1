#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hfstrat/encode.hpp"
#include "hfstrat/logistic.hpp"
#include "hfstrat/selection.hpp"
#include "hfstrat/tree.hpp"

namespace hfstrat {

enum class MetaProtocol { OutOfFold, InSample };
enum class MetaFeatureSet { LabelsAndConfidences, ConfidencesOnly };

std::string to_string(MetaProtocol p);
std::string to_string(MetaFeatureSet s);
MetaProtocol meta_protocol_from_string(const std::string& s);
MetaFeatureSet meta_feature_set_from_string(const std::string& s);

struct StackingConfig {
    GridSpec clinical_grid;  // logistic C
    GridSpec echo_grid;      // logistic C
    GridSpec forest_grid;    // n_trees, max_depth, min_samples_leaf
    GridSpec meta_grid;      // logistic C
    std::size_t k = 5;
    MetaProtocol protocol = MetaProtocol::OutOfFold;
    MetaFeatureSet features = MetaFeatureSet::LabelsAndConfidences;
    std::uint64_t seed = 0;

    /// Default grids for every slot, k = 5, OutOfFold.
    static StackingConfig defaults(std::uint64_t seed);
};

struct MetaFeatureRow {
    int clinical_label = 0;
    double clinical_confidence = 0.0;
    int echo_label = 0;
    double echo_confidence = 0.0;
    int full_label = 0;
    double full_confidence = 0.0;
};

std::vector<double> meta_row_values(const MetaFeatureRow& row, MetaFeatureSet set);
std::size_t meta_width(MetaFeatureSet set);

struct StackingProvenance {
    std::uint64_t seed = 0;
    std::size_t k = 5;
    MetaProtocol protocol = MetaProtocol::OutOfFold;
    MetaFeatureSet features = MetaFeatureSet::LabelsAndConfidences;
    ParamSet clinical_params, echo_params, forest_params, meta_params;
    double clinical_cv = 0.0, echo_cv = 0.0, forest_cv = 0.0, meta_cv = 0.0;
};

struct StackingEnsemble {
    LogisticModel clinical_model;
    LogisticModel echo_model;
    RandomForestModel full_model;
    LogisticModel meta_model;
    std::vector<std::size_t> clinical_columns;  // into the full design matrix
    std::vector<std::size_t> echo_columns;
    std::string schema_hash;
    int majority_label = 0;  // neutral substitute when a group is missing
    StackingProvenance provenance;
};

struct BaseExplanation {
    std::string model;  // "clinical", "echocardiographic", "full"
    int label = 0;
    double confidence = 0.0;
};

struct StackingPrediction {
    int label = 0;
    double confidence = 0.0;
    bool degraded = false;
    MetaFeatureRow meta;
    std::vector<BaseExplanation> explanation;  // always 3 entries
};

struct StackingTrainResult {
    StackingEnsemble ensemble;
    GridResult clinical_grid;
    GridResult echo_grid;
    GridResult forest_grid;
    GridResult meta_grid;
    Matrix meta_features;                 // one row per training sample
    std::vector<MetaFeatureRow> meta_rows;
    std::vector<std::size_t> meta_fold;   // OutOfFold: fold that held sample out
    std::vector<std::vector<std::size_t>> fold_train_sets;  // OutOfFold bookkeeping
    bool leakage_checked = false;         // true once the OutOfFold guard passed
};

/// Grid-searches the two specialized logistic models and the full-feature
/// forest, builds the meta-feature matrix per the configured protocol, and
/// grid-searches the logistic meta-model on top. OutOfFold produces each
/// sample's meta-features from base models that never saw it and then
/// retrains the base models on everything; InSample trains once and reuses
/// in-sample predictions.
StackingTrainResult train_stacking(const DesignMatrix& dm, const StackingConfig& cfg);

StackingPrediction predict_stacking(const StackingEnsemble& e, std::span<const double> x);

/// Prediction with one feature group absent: that group's base model and the
/// full-feature forest (whose inputs are incomplete) contribute the training
/// majority label with confidence 0.5. Always flagged degraded.
StackingPrediction predict_with_missing_group(const StackingEnsemble& e,
                                              std::span<const double> x, FeatureGroup missing);

/// Throws std::logic_error if any sample's meta-features came from a fold
/// whose training set contained it. No-op for InSample results.
void assert_leakage_free(const StackingTrainResult& result);

}  // namespace hfstrat
