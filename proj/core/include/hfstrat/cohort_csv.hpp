#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hfstrat/cohort.hpp"

namespace hfstrat {

struct RowError {
    std::size_t line = 0;  // 1-based file line
    std::string message;
};

struct LoadReport {
    std::size_t rows_read = 0;
    std::vector<RowError> row_errors;       // rejected rows
    std::vector<std::string> warnings;      // e.g. ignored unknown columns
};

struct LoadOptions {
    /// When the file carries a single "Diagnosis" column instead of
    /// Primary_/Secondary_Diagnosis, split it on `diagnosis_separator`
    /// (second part "None" when absent).
    bool split_diagnosis = false;
    char diagnosis_separator = '/';
};

/// Reads a cohort CSV: header `id,characterization_date,death_date,
/// last_followup_date,<feature names>`; ISO dates; empty cell = missing.
/// Rows with malformed dates, non-numeric numeric fields, or outcome dates
/// before characterization are rejected into the report. A header missing
/// the id or characterization_date column is fatal.
std::vector<RawPatientRecord> load_cohort(const std::filesystem::path& path,
                                          const CohortSchema& schema,
                                          LoadReport* report = nullptr,
                                          const LoadOptions& options = {});

void write_cohort_csv(const std::filesystem::path& path,
                      const std::vector<RawPatientRecord>& records,
                      const CohortSchema& schema);

/// Post-funnel dataset: `id,<features>,lifespan,censored,label`.
void write_labeled_csv(const std::filesystem::path& path, const LabeledCohort& cohort);
LabeledCohort load_labeled_cohort(const std::filesystem::path& path,
                                  const CohortSchema& schema);

/// Shortest round-trip decimal form of a double (to_chars).
std::string format_double(double v);

}  // namespace hfstrat
