#include "hfstrat/stacking.hpp"

#include <algorithm>
#include <stdexcept>

#include "hfstrat/log.hpp"
#include "hfstrat/trainers.hpp"

namespace hfstrat {

std::string to_string(MetaProtocol p) {
    return p == MetaProtocol::OutOfFold ? "out_of_fold" : "in_sample";
}

std::string to_string(MetaFeatureSet s) {
    return s == MetaFeatureSet::LabelsAndConfidences ? "labels_and_confidences"
                                                     : "confidences_only";
}

MetaProtocol meta_protocol_from_string(const std::string& s) {
    if (s == "out_of_fold") return MetaProtocol::OutOfFold;
    if (s == "in_sample") return MetaProtocol::InSample;
    throw std::invalid_argument("unknown meta protocol '" + s + "'");
}

MetaFeatureSet meta_feature_set_from_string(const std::string& s) {
    if (s == "labels_and_confidences") return MetaFeatureSet::LabelsAndConfidences;
    if (s == "confidences_only") return MetaFeatureSet::ConfidencesOnly;
    throw std::invalid_argument("unknown meta feature set '" + s + "'");
}

StackingConfig StackingConfig::defaults(std::uint64_t seed) {
    StackingConfig cfg;
    cfg.clinical_grid = default_logistic_grid();
    cfg.echo_grid = default_logistic_grid();
    cfg.forest_grid = default_forest_grid();
    cfg.meta_grid = default_logistic_grid();
    cfg.seed = seed;
    return cfg;
}

std::size_t meta_width(MetaFeatureSet set) {
    return set == MetaFeatureSet::LabelsAndConfidences ? 6 : 3;
}

std::vector<double> meta_row_values(const MetaFeatureRow& row, MetaFeatureSet set) {
    if (set == MetaFeatureSet::LabelsAndConfidences) {
        return {static_cast<double>(row.clinical_label), row.clinical_confidence,
                static_cast<double>(row.echo_label),     row.echo_confidence,
                static_cast<double>(row.full_label),     row.full_confidence};
    }
    return {row.clinical_confidence, row.echo_confidence, row.full_confidence};
}

namespace {

// rng stream tags for the seeds derived from StackingConfig::seed
constexpr std::uint64_t kClinicalGridTag = 1;
constexpr std::uint64_t kEchoGridTag = 2;
constexpr std::uint64_t kForestGridTag = 3;
constexpr std::uint64_t kOofTag = 4;
constexpr std::uint64_t kMetaGridTag = 5;

MetaFeatureRow make_meta_row(const LogisticModel& clin, const LogisticModel& echo,
                             const RandomForestModel& full, std::span<const double> x_clin,
                             std::span<const double> x_echo, std::span<const double> x_full) {
    MetaFeatureRow row;
    row.clinical_confidence = clin.confidence(x_clin);
    row.clinical_label = clin.label(x_clin);
    row.echo_confidence = echo.confidence(x_echo);
    row.echo_label = echo.label(x_echo);
    row.full_confidence = full.confidence(x_full);
    row.full_label = full.label(x_full);
    return row;
}

int majority(const std::vector<int>& y) {
    std::size_t positives = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
    // ties break toward the positive (at-risk) class: the costlier miss
    return positives * 2 >= y.size() ? 1 : 0;
}

}  // namespace

StackingTrainResult train_stacking(const DesignMatrix& dm, const StackingConfig& cfg) {
    if (cfg.k < 2) throw std::invalid_argument("stacking: k must be at least 2");
    if (cfg.clinical_grid.empty() || cfg.echo_grid.empty() || cfg.forest_grid.empty() ||
        cfg.meta_grid.empty()) {
        throw std::invalid_argument("stacking: every grid needs at least one axis");
    }
    auto [clin_dm, echo_dm] = split_columns(dm);
    if (clin_dm.cols() == 0 || echo_dm.cols() == 0) {
        throw std::invalid_argument("stacking: degenerate group");
    }
    bool has0 = std::count(dm.y.begin(), dm.y.end(), 0) > 0;
    bool has1 = std::count(dm.y.begin(), dm.y.end(), 1) > 0;
    if (!has0 || !has1) throw std::invalid_argument("stacking: both classes must be present");

    StackingTrainResult result;

    HFSTRAT_INFO("stacking: grid-searching clinical base model (%zu candidates)",
                 cfg.clinical_grid.candidate_count());
    result.clinical_grid = grid_search(logistic_trainer(), cfg.clinical_grid, clin_dm.x, dm.y,
                                       cfg.k, derive_seed(cfg.seed, kClinicalGridTag));
    HFSTRAT_INFO("stacking: grid-searching echocardiographic base model (%zu candidates)",
                 cfg.echo_grid.candidate_count());
    result.echo_grid = grid_search(logistic_trainer(), cfg.echo_grid, echo_dm.x, dm.y, cfg.k,
                                   derive_seed(cfg.seed, kEchoGridTag));
    HFSTRAT_INFO("stacking: grid-searching full-feature forest (%zu candidates)",
                 cfg.forest_grid.candidate_count());
    result.forest_grid = grid_search(forest_trainer(), cfg.forest_grid, dm.x, dm.y, cfg.k,
                                     derive_seed(cfg.seed, kForestGridTag));

    const ParamSet& clin_params = result.clinical_grid.winner().params;
    const ParamSet& echo_params = result.echo_grid.winner().params;
    const ParamSet& forest_params = result.forest_grid.winner().params;

    StackingEnsemble& e = result.ensemble;
    e.clinical_model = *dynamic_cast<const LogisticModel*>(result.clinical_grid.model.get());
    e.echo_model = *dynamic_cast<const LogisticModel*>(result.echo_grid.model.get());
    e.full_model = *dynamic_cast<const RandomForestModel*>(result.forest_grid.model.get());
    e.clinical_columns = dm.layout.group_columns(FeatureGroup::Clinical);
    e.echo_columns = dm.layout.group_columns(FeatureGroup::Echocardiographic);
    e.schema_hash = dm.layout.schema_hash();
    e.majority_label = majority(dm.y);

    // Meta-feature matrix: one row per training sample.
    const std::size_t n = dm.rows();
    result.meta_rows.resize(n);
    if (cfg.protocol == MetaProtocol::OutOfFold) {
        std::uint64_t oof_seed = derive_seed(cfg.seed, kOofTag);
        FoldPlan plan = stratified_kfold(dm.y, cfg.k, oof_seed);
        result.meta_fold.assign(n, 0);
        result.fold_train_sets.resize(cfg.k);
        for (std::size_t f = 0; f < cfg.k; ++f) {
            auto train_idx = plan.train_indices(f);
            result.fold_train_sets[f] = train_idx;
            std::vector<int> y_train = select(dm.y, train_idx);
            LogisticModel clin_f =
                logistic_from_params(clin_dm.x.select_rows(train_idx), y_train, clin_params);
            LogisticModel echo_f =
                logistic_from_params(echo_dm.x.select_rows(train_idx), y_train, echo_params);
            RandomForestModel full_f =
                forest_from_params(dm.x.select_rows(train_idx), y_train, forest_params,
                                   RngHandle{oof_seed, 8 + f});
            for (std::size_t i : plan.folds[f]) {
                result.meta_fold[i] = f;
                result.meta_rows[i] = make_meta_row(clin_f, echo_f, full_f, clin_dm.x.row(i),
                                                    echo_dm.x.row(i), dm.x.row(i));
            }
        }
        assert_leakage_free(result);
        result.leakage_checked = true;
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            result.meta_rows[i] = make_meta_row(e.clinical_model, e.echo_model, e.full_model,
                                                clin_dm.x.row(i), echo_dm.x.row(i), dm.x.row(i));
        }
    }

    result.meta_features = Matrix(n, meta_width(cfg.features));
    for (std::size_t i = 0; i < n; ++i) {
        auto values = meta_row_values(result.meta_rows[i], cfg.features);
        for (std::size_t j = 0; j < values.size(); ++j) result.meta_features(i, j) = values[j];
    }

    HFSTRAT_INFO("stacking: grid-searching meta-model (%zu candidates)",
                 cfg.meta_grid.candidate_count());
    result.meta_grid = grid_search(logistic_trainer(), cfg.meta_grid, result.meta_features, dm.y,
                                   cfg.k, derive_seed(cfg.seed, kMetaGridTag));
    e.meta_model = *dynamic_cast<const LogisticModel*>(result.meta_grid.model.get());

    e.provenance.seed = cfg.seed;
    e.provenance.k = cfg.k;
    e.provenance.protocol = cfg.protocol;
    e.provenance.features = cfg.features;
    e.provenance.clinical_params = clin_params;
    e.provenance.echo_params = echo_params;
    e.provenance.forest_params = forest_params;
    e.provenance.meta_params = result.meta_grid.winner().params;
    e.provenance.clinical_cv = result.clinical_grid.winner().mean_accuracy;
    e.provenance.echo_cv = result.echo_grid.winner().mean_accuracy;
    e.provenance.forest_cv = result.forest_grid.winner().mean_accuracy;
    e.provenance.meta_cv = result.meta_grid.winner().mean_accuracy;
    return result;
}

namespace {

std::vector<double> gather(std::span<const double> x, const std::vector<std::size_t>& cols) {
    std::vector<double> out;
    out.reserve(cols.size());
    for (std::size_t j : cols) out.push_back(x[j]);
    return out;
}

StackingPrediction finish(const StackingEnsemble& e, MetaFeatureRow meta, bool degraded) {
    StackingPrediction pred;
    pred.meta = meta;
    pred.degraded = degraded;
    auto values = meta_row_values(meta, e.provenance.features);
    pred.confidence = e.meta_model.confidence(values);
    pred.label = pred.confidence >= 0.5 ? 1 : 0;
    pred.explanation = {{"clinical", meta.clinical_label, meta.clinical_confidence},
                        {"echocardiographic", meta.echo_label, meta.echo_confidence},
                        {"full", meta.full_label, meta.full_confidence}};
    return pred;
}

}  // namespace

StackingPrediction predict_stacking(const StackingEnsemble& e, std::span<const double> x) {
    if (x.size() != e.clinical_columns.size() + e.echo_columns.size()) {
        throw std::invalid_argument("predict: row width does not match the ensemble's layout");
    }
    auto x_clin = gather(x, e.clinical_columns);
    auto x_echo = gather(x, e.echo_columns);
    MetaFeatureRow meta = make_meta_row(e.clinical_model, e.echo_model, e.full_model, x_clin,
                                        x_echo, x);
    return finish(e, meta, false);
}

StackingPrediction predict_with_missing_group(const StackingEnsemble& e,
                                              std::span<const double> x, FeatureGroup missing) {
    if (x.size() != e.clinical_columns.size() + e.echo_columns.size()) {
        throw std::invalid_argument("predict: row width does not match the ensemble's layout");
    }
    MetaFeatureRow meta;
    // The full-feature forest's inputs are incomplete either way, so it is
    // neutralized along with the missing group's specialist.
    meta.full_label = e.majority_label;
    meta.full_confidence = 0.5;
    if (missing == FeatureGroup::Clinical) {
        meta.clinical_label = e.majority_label;
        meta.clinical_confidence = 0.5;
        auto x_echo = gather(x, e.echo_columns);
        meta.echo_confidence = e.echo_model.confidence(x_echo);
        meta.echo_label = e.echo_model.label(x_echo);
    } else {
        meta.echo_label = e.majority_label;
        meta.echo_confidence = 0.5;
        auto x_clin = gather(x, e.clinical_columns);
        meta.clinical_confidence = e.clinical_model.confidence(x_clin);
        meta.clinical_label = e.clinical_model.label(x_clin);
    }
    return finish(e, meta, true);
}

void assert_leakage_free(const StackingTrainResult& result) {
    if (result.meta_fold.empty()) return;  // InSample: nothing to guard
    for (std::size_t i = 0; i < result.meta_fold.size(); ++i) {
        const auto& train_set = result.fold_train_sets.at(result.meta_fold[i]);
        if (std::binary_search(train_set.begin(), train_set.end(), i)) {
            throw std::logic_error("stacking: sample " + std::to_string(i) +
                                   " leaked into its own meta-feature fold");
        }
    }
}

}  // namespace hfstrat
