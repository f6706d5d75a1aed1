#include <algorithm>
#include <vector>

#include "doctest.h"
#include "hfstrat/model_io.hpp"
#include "hfstrat/stacking.hpp"
#include "hfstrat/synth.hpp"
#include "test_support.hpp"

using namespace hfstrat;

namespace {

DesignMatrix build_fixture(std::uint64_t seed, std::size_t n) {
    GeneratorSpec spec;
    spec.size = n;
    spec.signal = SignalPlacement::Split;
    spec.signal_strength = 3.0;
    const auto records = synthesize_cohort(spec, seed);
    return encode(preprocess(records, default_schema(), PreprocessConfig{}));
}

const DesignMatrix& fixture() {
    static const DesignMatrix dm = build_fixture(2024, 160);
    return dm;
}

StackingConfig small_config(std::uint64_t seed) {
    StackingConfig cfg;
    cfg.clinical_grid.axes = {{"C", {HyperValue{0.1}, HyperValue{10.0}}}};
    cfg.echo_grid = cfg.clinical_grid;
    cfg.meta_grid = cfg.clinical_grid;
    cfg.forest_grid.axes = {{"n_trees", {HyperValue{std::int64_t{15}}}},
                            {"max_depth", {HyperValue{std::int64_t{4}}}},
                            {"min_samples_leaf", {HyperValue{std::int64_t{1}}}}};
    cfg.k = 3;
    cfg.seed = seed;
    return cfg;
}

const StackingTrainResult& trained() {
    static const StackingTrainResult result = train_stacking(fixture(), small_config(7));
    return result;
}

}  // namespace

TEST_SUITE("stacking") {

TEST_CASE("enum names round trip") {
    CHECK(to_string(MetaProtocol::OutOfFold) == "out_of_fold");
    CHECK(meta_protocol_from_string("in_sample") == MetaProtocol::InSample);
    CHECK(to_string(MetaFeatureSet::ConfidencesOnly) == "confidences_only");
    CHECK(meta_feature_set_from_string("labels_and_confidences") ==
          MetaFeatureSet::LabelsAndConfidences);
    CHECK_THROWS_AS(meta_protocol_from_string("bootstrap"), std::invalid_argument);
    CHECK_THROWS_AS(meta_feature_set_from_string("everything"), std::invalid_argument);
}

TEST_CASE("meta rows order clinical, echo, full") {
    MetaFeatureRow row;
    row.clinical_label = 1;
    row.clinical_confidence = 0.9;
    row.echo_label = 0;
    row.echo_confidence = 0.3;
    row.full_label = 1;
    row.full_confidence = 0.75;

    CHECK(meta_width(MetaFeatureSet::LabelsAndConfidences) == 6);
    CHECK(meta_row_values(row, MetaFeatureSet::LabelsAndConfidences) ==
          std::vector<double>{1.0, 0.9, 0.0, 0.3, 1.0, 0.75});
    CHECK(meta_width(MetaFeatureSet::ConfidencesOnly) == 3);
    CHECK(meta_row_values(row, MetaFeatureSet::ConfidencesOnly) ==
          std::vector<double>{0.9, 0.3, 0.75});
}

TEST_CASE("out-of-fold training passes the leakage audit") {
    const auto& result = trained();
    CHECK(result.leakage_checked);
    CHECK(result.meta_fold.size() == fixture().rows());
    CHECK(result.fold_train_sets.size() == 3);
    CHECK_NOTHROW(assert_leakage_free(result));

    // Every sample's producing fold must exclude it; force a violation.
    StackingTrainResult tampered;
    tampered.ensemble = result.ensemble;
    tampered.meta_fold = result.meta_fold;
    tampered.fold_train_sets = result.fold_train_sets;
    tampered.leakage_checked = result.leakage_checked;
    auto& poisoned = tampered.fold_train_sets[tampered.meta_fold[0]];
    poisoned.push_back(0);
    std::sort(poisoned.begin(), poisoned.end());
    CHECK_THROWS_AS(assert_leakage_free(tampered), std::logic_error);
}

TEST_CASE("meta features have one row per sample and the configured width") {
    const auto& result = trained();
    CHECK(result.meta_features.rows() == fixture().rows());
    CHECK(result.meta_features.cols() == 6);
    CHECK(result.meta_rows.size() == fixture().rows());
    for (std::size_t i = 0; i < 20; ++i) {
        const auto vals =
            meta_row_values(result.meta_rows[i], MetaFeatureSet::LabelsAndConfidences);
        for (std::size_t j = 0; j < 6; ++j) CHECK(result.meta_features(i, j) == vals[j]);
    }
}

TEST_CASE("training twice is bit-identical") {
    const auto again = train_stacking(fixture(), small_config(7));
    CHECK(ensemble_to_json(again.ensemble) == ensemble_to_json(trained().ensemble));

    const auto other_seed = train_stacking(fixture(), small_config(8));
    CHECK(ensemble_to_json(other_seed.ensemble) != ensemble_to_json(trained().ensemble));
}

TEST_CASE("provenance records the searched configuration") {
    const auto& p = trained().ensemble.provenance;
    CHECK(p.seed == 7);
    CHECK(p.k == 3);
    CHECK(p.protocol == MetaProtocol::OutOfFold);
    CHECK(p.features == MetaFeatureSet::LabelsAndConfidences);
    CHECK(p.clinical_params.contains("C"));
    CHECK(p.forest_params.contains("n_trees"));
    for (double cv : {p.clinical_cv, p.echo_cv, p.forest_cv, p.meta_cv}) {
        CHECK(cv >= 0.0);
        CHECK(cv <= 100.0);
    }
}

TEST_CASE("base models see only their own feature group") {
    const auto& e = trained().ensemble;
    CHECK(e.clinical_columns.size() == 29);
    CHECK(e.echo_columns.size() == 18);
    CHECK(e.clinical_model.weights().size() == 29);
    CHECK(e.echo_model.weights().size() == 18);

    std::vector<double> row(fixture().x.row(3).begin(), fixture().x.row(3).end());
    const auto before = predict_stacking(e, row);
    row[e.echo_columns[0]] += 1.0;  // perturb an echo feature
    const auto after = predict_stacking(e, row);
    CHECK(before.explanation[0].model == "clinical");
    CHECK(before.explanation[0].confidence == after.explanation[0].confidence);

    std::vector<double> row2(fixture().x.row(3).begin(), fixture().x.row(3).end());
    row2[e.clinical_columns[3]] += 1.0;  // perturb a clinical feature (EF column)
    const auto after2 = predict_stacking(e, row2);
    CHECK(before.explanation[1].model == "echocardiographic");
    CHECK(before.explanation[1].confidence == after2.explanation[1].confidence);
}

TEST_CASE("full prediction explains all three base models") {
    const auto& e = trained().ensemble;
    const auto row = fixture().x.row(0);
    const auto pred = predict_stacking(e, row);

    CHECK_FALSE(pred.degraded);
    REQUIRE(pred.explanation.size() == 3);
    CHECK(pred.explanation[0].model == "clinical");
    CHECK(pred.explanation[1].model == "echocardiographic");
    CHECK(pred.explanation[2].model == "full");
    CHECK((pred.label == 0 || pred.label == 1));
    CHECK(pred.confidence >= 0.0);
    CHECK(pred.confidence <= 1.0);

    // The meta model consumes exactly the explained meta row.
    const auto meta_in = meta_row_values(pred.meta, MetaFeatureSet::LabelsAndConfidences);
    CHECK(pred.confidence == e.meta_model.confidence(meta_in));
    CHECK(pred.meta.clinical_confidence == pred.explanation[0].confidence);
    CHECK(pred.meta.full_confidence == pred.explanation[2].confidence);
}

TEST_CASE("a missing group degrades to the neutral substitute") {
    const auto& e = trained().ensemble;
    std::vector<double> row(fixture().x.row(5).begin(), fixture().x.row(5).end());
    const auto full = predict_stacking(e, row);
    const auto degraded = predict_with_missing_group(e, row, FeatureGroup::Echocardiographic);

    CHECK(degraded.degraded);
    CHECK(degraded.explanation[0].confidence == full.explanation[0].confidence);
    CHECK(degraded.explanation[1].label == e.majority_label);
    CHECK(degraded.explanation[1].confidence == 0.5);
    CHECK(degraded.explanation[2].label == e.majority_label);  // forest inputs incomplete too
    CHECK(degraded.explanation[2].confidence == 0.5);

    // The echo columns are never read: garbage there changes nothing.
    std::vector<double> garbage = row;
    for (std::size_t c : e.echo_columns) garbage[c] = 1e9;
    const auto same = predict_with_missing_group(e, garbage, FeatureGroup::Echocardiographic);
    CHECK(same.confidence == degraded.confidence);
    CHECK(same.label == degraded.label);

    const auto no_clin = predict_with_missing_group(e, row, FeatureGroup::Clinical);
    CHECK(no_clin.degraded);
    CHECK(no_clin.explanation[0].label == e.majority_label);
    CHECK(no_clin.explanation[1].confidence == full.explanation[1].confidence);
}

TEST_CASE("majority label reflects the training labels") {
    const auto& dm = fixture();
    std::size_t ones = 0;
    for (int v : dm.y) ones += static_cast<std::size_t>(v);
    const int expected = 2 * ones >= dm.y.size() ? 1 : 0;
    CHECK(trained().ensemble.majority_label == expected);
}

TEST_CASE("in-sample protocol skips fold bookkeeping") {
    auto cfg = small_config(7);
    cfg.protocol = MetaProtocol::InSample;
    const auto result = train_stacking(fixture(), cfg);
    CHECK_FALSE(result.leakage_checked);
    CHECK(result.meta_fold.empty());
    CHECK(result.meta_features.rows() == fixture().rows());
    CHECK_NOTHROW(assert_leakage_free(result));  // no-op without fold bookkeeping

    // Meta rows are the final base models' own predictions.
    const auto& e = result.ensemble;
    for (std::size_t i = 0; i < 10; ++i) {
        std::vector<double> clin, echo;
        for (std::size_t c : e.clinical_columns) clin.push_back(fixture().x(i, c));
        for (std::size_t c : e.echo_columns) echo.push_back(fixture().x(i, c));
        CHECK(result.meta_rows[i].clinical_confidence == e.clinical_model.confidence(clin));
        CHECK(result.meta_rows[i].echo_confidence == e.echo_model.confidence(echo));
        CHECK(result.meta_rows[i].full_confidence ==
              e.full_model.confidence(fixture().x.row(i)));
    }
}

TEST_CASE("confidences-only meta set narrows the meta matrix") {
    auto cfg = small_config(7);
    cfg.features = MetaFeatureSet::ConfidencesOnly;
    const auto result = train_stacking(fixture(), cfg);
    CHECK(result.meta_features.cols() == 3);
    CHECK(result.ensemble.meta_model.weights().size() == 3);
}

TEST_CASE("configuration validation") {
    auto cfg = small_config(7);
    cfg.k = 1;
    CHECK_THROWS_AS(train_stacking(fixture(), cfg), std::invalid_argument);

    cfg = small_config(7);
    cfg.meta_grid.axes.clear();
    CHECK_THROWS_AS(train_stacking(fixture(), cfg), std::invalid_argument);

    DesignMatrix single;
    single.x = fixture().x;
    single.y.assign(fixture().rows(), 1);
    single.layout = fixture().layout;
    CHECK_THROWS_AS(train_stacking(single, small_config(7)), std::invalid_argument);
}

TEST_CASE("serialization round trip is bit-exact") {
    const auto& e = trained().ensemble;
    const StackingEnsemble loaded = ensemble_from_json(ensemble_to_json(e));

    CHECK(loaded.schema_hash == e.schema_hash);
    CHECK(loaded.majority_label == e.majority_label);
    CHECK(loaded.clinical_columns == e.clinical_columns);
    CHECK(loaded.provenance.seed == e.provenance.seed);

    const DesignMatrix probe = build_fixture(5150, 100);
    REQUIRE(probe.layout.schema_hash() == e.schema_hash);
    for (std::size_t i = 0; i < probe.rows(); ++i) {
        const auto a = predict_stacking(e, probe.x.row(i));
        const auto b = predict_stacking(loaded, probe.x.row(i));
        CHECK(a.label == b.label);
        CHECK(a.confidence == b.confidence);  // bit-equal through the JSON trip
        CHECK(a.meta.clinical_confidence == b.meta.clinical_confidence);
        CHECK(a.meta.echo_confidence == b.meta.echo_confidence);
        CHECK(a.meta.full_confidence == b.meta.full_confidence);
    }
}

TEST_CASE("defaults cover every grid slot") {
    const auto cfg = StackingConfig::defaults(42);
    CHECK(cfg.seed == 42);
    CHECK(cfg.k == 5);
    CHECK(cfg.protocol == MetaProtocol::OutOfFold);
    CHECK(cfg.clinical_grid.candidate_count() == 5);
    CHECK(cfg.forest_grid.candidate_count() == 12);
    CHECK(cfg.meta_grid.candidate_count() == 5);
}

}  // TEST_SUITE
