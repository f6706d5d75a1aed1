#pragma once

// Shared fixtures for the unit tests: complete in-domain records, small
// synthetic design matrices, and throwaway directories.

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "hfstrat/cohort.hpp"
#include "hfstrat/encode.hpp"
#include "hfstrat/matrix.hpp"
#include "hfstrat/rng.hpp"
#include "hfstrat/schema.hpp"

namespace testsupport {

// A complete, in-domain record against the built-in 33-feature schema.
inline hfstrat::RawPatientRecord make_record(const std::string& id = "P0001") {
    using hfstrat::FeatureValue;
    hfstrat::RawPatientRecord r;
    r.id = id;
    r.characterization_date = *hfstrat::parse_date("2015-06-01");
    auto& v = r.values;
    v["Primary_Diagnosis"] = FeatureValue{std::string("Ischemic")};
    v["Secondary_Diagnosis"] = FeatureValue{std::string("None")};
    v["HFpEF"] = FeatureValue{std::string("HFrEF")};
    v["EF"] = FeatureValue{35.0};
    v["NYHA"] = FeatureValue{std::string("II")};
    v["Age"] = FeatureValue{70.0};
    v["BMI"] = FeatureValue{27.5};
    v["Sex"] = FeatureValue{1.0};
    v["Hypertension"] = FeatureValue{1.0};
    v["Dyslipidemia"] = FeatureValue{0.0};
    v["Diabetic"] = FeatureValue{0.0};
    v["Bronchopneumonia"] = FeatureValue{0.0};
    v["Beta-Blocker"] = FeatureValue{1.0};
    v["ACE_SART"] = FeatureValue{1.0};
    v["Anti-Aldosterone"] = FeatureValue{0.0};
    v["PARETE POST"] = FeatureValue{10.0};
    v["SETTO"] = FeatureValue{11.0};
    v["LVES_DIAM"] = FeatureValue{45.0};
    v["LVED_DIAM"] = FeatureValue{58.0};
    v["VDx"] = FeatureValue{33.0};
    v["LVMI"] = FeatureValue{128.0};
    v["ASx"] = FeatureValue{42.0};
    v["TAPSE"] = FeatureValue{19.0};
    v["RS"] = FeatureValue{0.0};
    v["BBSx"] = FeatureValue{1.0};
    v["BBDx"] = FeatureValue{0.0};
    v["NT-proBNP"] = FeatureValue{1400.0};
    v["Blood Creatinine Level"] = FeatureValue{1.1};
    v["Glucose"] = FeatureValue{105.0};
    v["FA"] = FeatureValue{0.0};
    v["Flutter"] = FeatureValue{0.0};
    v["PM"] = FeatureValue{0.0};
    v["Hb"] = FeatureValue{13.5};
    return r;
}

// Record that died `death_days` after characterization (uncensored).
inline hfstrat::RawPatientRecord died_after(const std::string& id, long death_days) {
    auto r = make_record(id);
    auto base = std::chrono::sys_days(r.characterization_date);
    r.death_date = hfstrat::Date(base + std::chrono::days(death_days));
    return r;
}

// Record censored at `followup_days` after characterization.
inline hfstrat::RawPatientRecord censored_after(const std::string& id, long followup_days) {
    auto r = make_record(id);
    auto base = std::chrono::sys_days(r.characterization_date);
    r.last_followup_date = hfstrat::Date(base + std::chrono::days(followup_days));
    return r;
}

// Fresh empty directory under the system temp root; caller owns cleanup
// (tests leave it unless they say otherwise; the OS temp dir is disposable).
inline std::filesystem::path make_temp_dir(const std::string& tag) {
    static std::mt19937_64 gen(std::random_device{}());
    auto dir = std::filesystem::temp_directory_path() /
               ("hfstrat_" + tag + "_" + std::to_string(gen()));
    std::filesystem::create_directories(dir);
    return dir;
}

// Linearly separable two-class blob: class c is centered at (3c, 3c, ...).
inline std::pair<hfstrat::Matrix, std::vector<int>> separable_blobs(std::size_t n_per_class,
                                                                    std::size_t d,
                                                                    std::uint64_t seed) {
    hfstrat::RngStream rng(seed, 0);
    hfstrat::Matrix x(2 * n_per_class, d);
    std::vector<int> y(2 * n_per_class);
    for (std::size_t i = 0; i < 2 * n_per_class; ++i) {
        const int cls = i < n_per_class ? 0 : 1;
        y[i] = cls;
        for (std::size_t j = 0; j < d; ++j) {
            x(i, j) = 3.0 * cls + rng.next_gaussian();
        }
    }
    return {std::move(x), std::move(y)};
}

// Random dataset with values on a small integer grid (deliberately full of
// ties) for tree tests.
inline std::pair<hfstrat::Matrix, std::vector<int>> grid_dataset(std::size_t n, std::size_t d,
                                                                 std::uint64_t seed) {
    hfstrat::RngStream rng(seed, 0);
    hfstrat::Matrix x(n, d);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            x(i, j) = static_cast<double>(rng.next_below(5));
        }
        y[i] = static_cast<int>(rng.next_below(2));
    }
    return {std::move(x), std::move(y)};
}

}  // namespace testsupport
