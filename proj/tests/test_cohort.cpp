#include <string>
#include <vector>

#include "doctest.h"
#include "hfstrat/cohort.hpp"
#include "test_support.hpp"

using namespace hfstrat;
using testsupport::censored_after;
using testsupport::died_after;
using testsupport::make_record;

TEST_SUITE("cohort") {

TEST_CASE("ISO date parsing accepts valid dates only") {
    REQUIRE(parse_date("2015-06-01").has_value());
    CHECK(format_date(*parse_date("2015-06-01")) == "2015-06-01");
    CHECK(format_date(*parse_date("1999-12-31")) == "1999-12-31");

    CHECK_FALSE(parse_date("").has_value());
    CHECK_FALSE(parse_date("2015-6-01").has_value());
    CHECK_FALSE(parse_date("2015/06/01").has_value());
    CHECK_FALSE(parse_date("2015-02-30").has_value());
    CHECK_FALSE(parse_date("2015-13-01").has_value());
    CHECK_FALSE(parse_date("not-a-date").has_value());
    CHECK_FALSE(parse_date("2015-06-015").has_value());
}

TEST_CASE("days_between spans leap years") {
    CHECK(days_between(*parse_date("2016-02-28"), *parse_date("2016-03-01")) == 2);
    CHECK(days_between(*parse_date("2015-02-28"), *parse_date("2015-03-01")) == 1);
    CHECK(days_between(*parse_date("2015-01-01"), *parse_date("2018-01-01")) == 1096);
    CHECK(days_between(*parse_date("2015-06-01"), *parse_date("2015-06-01")) == 0);
    CHECK(days_between(*parse_date("2015-06-02"), *parse_date("2015-06-01")) == -1);
}

TEST_CASE("lifespan derivation prefers the death date") {
    CHECK_FALSE(derive_lifespan(make_record()).has_value());

    const auto died = derive_lifespan(died_after("P1", 400));
    REQUIRE(died.has_value());
    CHECK(died->days == 400);
    CHECK_FALSE(died->censored);

    const auto followed = derive_lifespan(censored_after("P2", 1200));
    REQUIRE(followed.has_value());
    CHECK(followed->days == 1200);
    CHECK(followed->censored);

    auto both = died_after("P3", 300);
    both.last_followup_date = censored_after("P3", 900).last_followup_date;
    const auto life = derive_lifespan(both);
    REQUIRE(life.has_value());
    CHECK(life->days == 300);
    CHECK_FALSE(life->censored);
}

TEST_CASE("threshold labeling at the three-year boundary") {
    const PreprocessConfig cfg;
    CHECK(assign_label(30, false, cfg) == kAtRisk);
    CHECK(assign_label(1095, false, cfg) == kAtRisk);      // exactly at threshold
    CHECK(assign_label(1096, false, cfg) == kNotAtRisk);   // died after horizon
    CHECK(assign_label(2000, false, cfg) == kNotAtRisk);
    CHECK(assign_label(1095, true, cfg) == kNotAtRisk);    // censored at the floor
    CHECK(assign_label(1500, true, cfg) == kNotAtRisk);
    CHECK_THROWS_AS(assign_label(1000, true, cfg), std::logic_error);
}

TEST_CASE("funnel order, counts, and labels") {
    std::vector<RawPatientRecord> records;
    records.push_back(died_after("P1", 500));        // survives, AtRisk
    records.push_back(censored_after("P2", 1400));   // survives, NotAtRisk
    records.push_back(make_record("P3"));            // no outcome -> step 2
    records.push_back(censored_after("P4", 800));    // short follow-up -> step 2
    auto missing = died_after("P5", 600);            // incomplete -> step 3
    missing.values.erase("TAPSE");
    records.push_back(missing);
    auto bad = died_after("P6", 700);                // out of domain -> step 4
    bad.values["EF"] = FeatureValue{999.0};
    records.push_back(bad);
    records.push_back(died_after("P7", 2000));       // survives, NotAtRisk

    const LabeledCohort cohort = preprocess(records, default_schema(), PreprocessConfig{});

    REQUIRE(cohort.funnel.size() == 4);
    CHECK(cohort.funnel[0].name == "lifespan_derivation");
    CHECK(cohort.funnel[0].records_remaining == 7);
    CHECK(cohort.funnel[1].name == "outcome_retention");
    CHECK(cohort.funnel[1].records_remaining == 5);
    CHECK(cohort.funnel[2].name == "missing_removal");
    CHECK(cohort.funnel[2].records_remaining == 4);
    CHECK(cohort.funnel[3].name == "domain_removal");
    CHECK(cohort.funnel[3].records_remaining == 3);

    REQUIRE(cohort.size() == 3);
    CHECK(cohort.records[0].id == "P1");
    CHECK(cohort.records[1].id == "P2");
    CHECK(cohort.records[2].id == "P7");
    CHECK(cohort.labels == std::vector<int>{kAtRisk, kNotAtRisk, kNotAtRisk});
    CHECK(cohort.lifespans == std::vector<long>{500, 1400, 2000});
    CHECK(cohort.censored == std::vector<bool>{false, true, false});
}

TEST_CASE("an empty surviving cohort is an error") {
    std::vector<RawPatientRecord> records = {make_record("P1"), make_record("P2")};
    CHECK_THROWS_AS(preprocess(records, default_schema(), PreprocessConfig{}),
                    std::runtime_error);
}

TEST_CASE("funnel respects custom thresholds") {
    std::vector<RawPatientRecord> records = {censored_after("P1", 800),
                                             died_after("P2", 700)};
    PreprocessConfig cfg;
    cfg.label_threshold_days = 730;
    cfg.min_followup_days = 730;
    const LabeledCohort cohort = preprocess(records, default_schema(), cfg);
    REQUIRE(cohort.size() == 2);
    CHECK(cohort.labels == std::vector<int>{kNotAtRisk, kAtRisk});

    cfg.label_threshold_days = 0;
    CHECK_THROWS_AS(preprocess(records, default_schema(), cfg), std::invalid_argument);
}

}  // TEST_SUITE
