#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "hfstrat/cohort.hpp"
#include "hfstrat/encode.hpp"
#include "test_support.hpp"

using namespace hfstrat;
using testsupport::died_after;
using testsupport::make_record;

namespace {

EncodingLayout layout() { return EncodingLayout::from_schema(default_schema()); }

}  // namespace

TEST_SUITE("encode") {

TEST_CASE("layout expands categoricals over the declared domain") {
    const auto lay = layout();
    // 29 passthrough (14 numeric + 15 binary) + 18 one-hot
    // (5 + 6 + 3 + 4 categories) = 47 columns.
    CHECK(lay.size() == 47);

    const auto clinical = lay.group_columns(FeatureGroup::Clinical);
    const auto echo = lay.group_columns(FeatureGroup::Echocardiographic);
    CHECK(clinical.size() == 29);
    CHECK(echo.size() == 18);

    // Disjoint and jointly exhaustive.
    std::set<std::size_t> all(clinical.begin(), clinical.end());
    all.insert(echo.begin(), echo.end());
    CHECK(all.size() == 47);

    // One-hot columns carry their category and source feature.
    int nyha_cols = 0;
    for (const auto& col : lay.columns) {
        if (col.feature == "NYHA") {
            ++nyha_cols;
            CHECK(col.name == "NYHA=" + col.category);
            CHECK(col.kind == FeatureKind::Categorical);
        }
    }
    CHECK(nyha_cols == 4);
}

TEST_CASE("numeric_columns lists exactly the numeric passthroughs") {
    const auto lay = layout();
    const auto numeric = lay.numeric_columns();
    CHECK(numeric.size() == 15);
    for (std::size_t c : numeric) CHECK(lay.columns[c].kind == FeatureKind::Numeric);
}

TEST_CASE("encode_record writes one-hot blocks and passthrough values") {
    const auto lay = layout();
    const auto rec = make_record();
    const auto row = lay.encode_record(rec.values);
    REQUIRE(row.size() == lay.size());

    for (std::size_t c = 0; c < lay.size(); ++c) {
        const auto& col = lay.columns[c];
        if (col.kind == FeatureKind::Categorical) {
            const auto& chosen = std::get<std::string>(rec.values.at(col.feature));
            CHECK(row[c] == (col.category == chosen ? 1.0 : 0.0));
        } else {
            CHECK(row[c] == std::get<double>(rec.values.at(col.feature)));
        }
    }
}

TEST_CASE("decode_row inverts encode_record") {
    const auto lay = layout();
    const auto rec = make_record();
    const auto row = lay.encode_record(rec.values);
    const auto decoded = lay.decode_row(row);
    CHECK(decoded == rec.values);
}

TEST_CASE("encode_record rejects incomplete or out-of-domain categorical input") {
    const auto lay = layout();
    auto rec = make_record();
    rec.values.erase("Age");
    CHECK_THROWS(lay.encode_record(rec.values));

    auto rec2 = make_record();
    rec2.values["NYHA"] = FeatureValue{std::string("V")};
    CHECK_THROWS(lay.encode_record(rec2.values));
}

TEST_CASE("encode_record_group fills only the present group") {
    const auto lay = layout();
    auto rec = make_record();
    // Strip every echocardiographic feature.
    for (const auto& f : default_schema().features) {
        if (f.group == FeatureGroup::Echocardiographic) rec.values.erase(f.name);
    }
    const auto row = lay.encode_record_group(rec.values, FeatureGroup::Clinical);
    REQUIRE(row.size() == lay.size());

    const auto full = lay.encode_record(make_record().values);
    for (std::size_t c : lay.group_columns(FeatureGroup::Clinical)) CHECK(row[c] == full[c]);
    for (std::size_t c : lay.group_columns(FeatureGroup::Echocardiographic)) CHECK(row[c] == 0.0);

    // The present group must still be complete.
    rec.values.erase("EF");
    CHECK_THROWS(lay.encode_record_group(rec.values, FeatureGroup::Clinical));
}

TEST_CASE("schema_hash pins the layout") {
    const auto h = layout().schema_hash();
    CHECK_FALSE(h.empty());
    CHECK(h == layout().schema_hash());  // deterministic

    CohortSchema reduced = default_schema();
    reduced.features.pop_back();
    CHECK(EncodingLayout::from_schema(reduced).schema_hash() != h);
}

TEST_CASE("encode builds the design matrix with labels") {
    std::vector<RawPatientRecord> records = {died_after("P1", 400), died_after("P2", 2000),
                                             died_after("P3", 100)};
    const LabeledCohort cohort = preprocess(records, default_schema(), PreprocessConfig{});
    const DesignMatrix dm = encode(cohort);

    CHECK(dm.rows() == 3);
    CHECK(dm.cols() == 47);
    CHECK(dm.y == std::vector<int>{kAtRisk, kNotAtRisk, kAtRisk});
    CHECK(dm.x.all_finite());
    CHECK(dm.layout.schema_hash() == layout().schema_hash());
}

TEST_CASE("split_columns partitions the design matrix by group") {
    std::vector<RawPatientRecord> records = {died_after("P1", 400), died_after("P2", 2000)};
    const LabeledCohort cohort = preprocess(records, default_schema(), PreprocessConfig{});
    const DesignMatrix dm = encode(cohort);
    const auto [clin, echo] = split_columns(dm);

    CHECK(clin.cols() == 29);
    CHECK(echo.cols() == 18);
    CHECK(clin.rows() == dm.rows());
    CHECK(clin.y == dm.y);
    CHECK(echo.y == dm.y);

    const auto clin_cols = dm.layout.group_columns(FeatureGroup::Clinical);
    for (std::size_t i = 0; i < dm.rows(); ++i) {
        for (std::size_t j = 0; j < clin_cols.size(); ++j) {
            CHECK(clin.x(i, j) == dm.x(i, clin_cols[j]));
        }
    }
}

}  // TEST_SUITE
