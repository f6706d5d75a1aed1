#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hfstrat/schema.hpp"

namespace hfstrat {

using Date = std::chrono::year_month_day;

/// Parses ISO-8601 YYYY-MM-DD. Returns nullopt for anything else.
std::optional<Date> parse_date(const std::string& s);
std::string format_date(const Date& d);
long days_between(const Date& from, const Date& to);

/// A patient row as loaded, before the preprocessing funnel. Absent map
/// entries are missing values.
struct RawPatientRecord {
    std::string id;
    std::map<std::string, FeatureValue> values;
    Date characterization_date{};
    std::optional<Date> death_date;
    std::optional<Date> last_followup_date;
};

struct PreprocessConfig {
    long label_threshold_days = 1095;  // three years
    long min_followup_days = 1095;
};

constexpr int kNotAtRisk = 0;
constexpr int kAtRisk = 1;

struct Lifespan {
    long days = 0;
    bool censored = false;  // true when derived from follow-up, not death
};

/// Days from characterization to death, or to last follow-up (censored).
/// nullopt when the record carries no outcome date at all.
std::optional<Lifespan> derive_lifespan(const RawPatientRecord& r);

/// Threshold labeling. Uncensored records at or under the threshold are
/// AtRisk; everything else surviving the funnel is NotAtRisk. A censored
/// record below the follow-up floor should have been filtered earlier and
/// raises std::logic_error.
int assign_label(long lifespan_days, bool censored, const PreprocessConfig& cfg);

struct FunnelStep {
    std::string name;
    std::size_t records_remaining = 0;
};

/// Post-funnel cohort: complete, in-domain records with lifespans and labels.
struct LabeledCohort {
    CohortSchema schema;
    std::vector<RawPatientRecord> records;
    std::vector<long> lifespans;
    std::vector<bool> censored;
    std::vector<int> labels;
    std::vector<FunnelStep> funnel;

    std::size_t size() const { return records.size(); }
};

/// The preprocessing funnel, in order:
///   1. lifespan derivation (count unchanged)
///   2. keep records with death information or censored follow-up >= floor
///   3. drop records with any missing schema feature
///   4. drop records with out-of-domain values
/// then label every survivor. funnel holds the count after each of the four
/// steps. Throws std::runtime_error when nothing survives.
LabeledCohort preprocess(const std::vector<RawPatientRecord>& records,
                         const CohortSchema& schema, const PreprocessConfig& cfg);

}  // namespace hfstrat
