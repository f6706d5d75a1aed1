#include "hfstrat/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "hfstrat/numerics.hpp"
#include "hfstrat/rng.hpp"

namespace hfstrat {

std::string to_string(SignalPlacement p) {
    switch (p) {
        case SignalPlacement::ClinicalOnly: return "clinical_only";
        case SignalPlacement::EchoOnly: return "echo_only";
        case SignalPlacement::Split: return "split";
    }
    return "split";
}

SignalPlacement signal_placement_from_string(const std::string& s) {
    if (s == "clinical_only") return SignalPlacement::ClinicalOnly;
    if (s == "echo_only") return SignalPlacement::EchoOnly;
    if (s == "split") return SignalPlacement::Split;
    throw std::invalid_argument("unknown signal placement '" + s + "'");
}

namespace {

enum class Role { Clean, OutcomeFail, MissingFail, DomainFail };

// rng stream tags under the generator seed
constexpr std::uint64_t kRolesTag = 1;
constexpr std::uint64_t kValuesTag = 2;
constexpr std::uint64_t kLabelsTag = 3;
constexpr std::uint64_t kOutcomesTag = 4;
constexpr std::uint64_t kFaultsTag = 5;

double rounded(double v, int decimals) {
    double scale = std::pow(10.0, decimals);
    return std::round(v * scale) / scale;
}

double clamp_round(double v, double lo, double hi, int decimals) {
    return std::clamp(rounded(v, decimals), lo, hi);
}

double draw_normal(RngStream& rng, double mean, double sd, double lo, double hi, int decimals) {
    return clamp_round(mean + sd * rng.next_gaussian(), lo, hi, decimals);
}

double draw_bernoulli(RngStream& rng, double p) { return rng.next_uniform() < p ? 1.0 : 0.0; }

std::string draw_categorical(RngStream& rng, const std::vector<std::string>& cats,
                             const std::vector<double>& weights) {
    double u = rng.next_uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < cats.size(); ++i) {
        acc += weights[i];
        if (u < acc) return cats[i];
    }
    return cats.back();
}

// Nominal population marginals, all inside the default schema's domains.
std::map<std::string, FeatureValue> draw_record_values(RngStream& rng) {
    std::map<std::string, FeatureValue> v;
    v["Primary_Diagnosis"] = draw_categorical(
        rng, {"Ischemic", "Hypertensive", "Dilated", "Valvular", "Other"},
        {0.40, 0.20, 0.20, 0.12, 0.08});
    v["Secondary_Diagnosis"] = draw_categorical(
        rng, {"None", "Ischemic", "Hypertensive", "Dilated", "Valvular", "Other"},
        {0.55, 0.10, 0.15, 0.08, 0.07, 0.05});
    v["HFpEF"] = draw_categorical(rng, {"HFrEF", "HFmrEF", "HFpEF"}, {0.50, 0.25, 0.25});
    v["EF"] = draw_normal(rng, 38.0, 12.0, 5.0, 85.0, 0);
    v["NYHA"] = draw_categorical(rng, {"I", "II", "III", "IV"}, {0.15, 0.40, 0.35, 0.10});
    v["Age"] = draw_normal(rng, 71.0, 11.0, 18.0, 105.0, 0);
    v["BMI"] = draw_normal(rng, 27.5, 4.5, 12.0, 60.0, 1);
    v["Sex"] = draw_bernoulli(rng, 0.65);
    v["Hypertension"] = draw_bernoulli(rng, 0.60);
    v["Dyslipidemia"] = draw_bernoulli(rng, 0.45);
    v["Diabetic"] = draw_bernoulli(rng, 0.35);
    v["Bronchopneumonia"] = draw_bernoulli(rng, 0.12);
    v["Beta-Blocker"] = draw_bernoulli(rng, 0.75);
    v["ACE_SART"] = draw_bernoulli(rng, 0.65);
    v["Anti-Aldosterone"] = draw_bernoulli(rng, 0.40);
    v["PARETE POST"] = draw_normal(rng, 10.5, 1.8, 4.0, 22.0, 1);
    v["SETTO"] = draw_normal(rng, 11.0, 2.0, 4.0, 26.0, 1);
    v["LVES_DIAM"] = draw_normal(rng, 42.0, 9.0, 15.0, 85.0, 0);
    v["LVED_DIAM"] = draw_normal(rng, 56.0, 8.0, 25.0, 95.0, 0);
    v["VDx"] = draw_normal(rng, 33.0, 6.0, 12.0, 62.0, 0);
    v["LVMI"] = draw_normal(rng, 130.0, 30.0, 40.0, 260.0, 0);
    v["ASx"] = draw_normal(rng, 42.0, 7.0, 18.0, 75.0, 0);
    v["TAPSE"] = draw_normal(rng, 19.0, 4.0, 4.0, 36.0, 0);
    v["RS"] = draw_bernoulli(rng, 0.20);
    v["BBSx"] = draw_bernoulli(rng, 0.25);
    v["BBDx"] = draw_bernoulli(rng, 0.10);
    v["NT-proBNP"] = clamp_round(std::exp(7.2 + 1.1 * rng.next_gaussian()), 5.0, 36000.0, 0);
    v["Blood Creatinine Level"] = draw_normal(rng, 1.15, 0.4, 0.2, 12.0, 2);
    v["Glucose"] = draw_normal(rng, 112.0, 30.0, 40.0, 420.0, 0);
    v["FA"] = draw_bernoulli(rng, 0.30);
    v["Flutter"] = draw_bernoulli(rng, 0.05);
    v["PM"] = draw_bernoulli(rng, 0.15);
    v["Hb"] = draw_normal(rng, 13.2, 1.8, 4.0, 22.0, 1);
    return v;
}

double numeric_value(const std::map<std::string, FeatureValue>& v, const std::string& name) {
    return std::get<double>(v.at(name));
}

// Standardized risk contributions; positive means higher risk.
double clinical_signal(const std::map<std::string, FeatureValue>& v) {
    double ef = (38.0 - numeric_value(v, "EF")) / 12.0;        // low EF is risky
    double age = (numeric_value(v, "Age") - 71.0) / 11.0;      // old age is risky
    double bmi = (27.5 - numeric_value(v, "BMI")) / 4.5;       // low BMI is risky
    return ef + age + bmi;
}

double echo_signal(const std::map<std::string, FeatureValue>& v) {
    double tapse = (19.0 - numeric_value(v, "TAPSE")) / 4.0;   // low TAPSE is risky
    double lvmi = (numeric_value(v, "LVMI") - 130.0) / 30.0;   // high mass is risky
    double asx = (numeric_value(v, "ASx") - 42.0) / 7.0;       // dilated atrium is risky
    return tapse + lvmi + asx;
}

double risk_score(const std::map<std::string, FeatureValue>& v, SignalPlacement placement,
                  double strength) {
    switch (placement) {
        case SignalPlacement::ClinicalOnly:
            return strength / std::sqrt(3.0) * clinical_signal(v);
        case SignalPlacement::EchoOnly:
            return strength / std::sqrt(3.0) * echo_signal(v);
        case SignalPlacement::Split:
            return strength / std::sqrt(6.0) * (clinical_signal(v) + echo_signal(v));
    }
    return 0.0;
}

Date offset_date(const Date& base, long days) {
    return Date{std::chrono::sys_days(base) + std::chrono::days(days)};
}

std::string record_id(std::size_t index, std::size_t total) {
    int width = 4;
    for (std::size_t t = total; t > 9999; t /= 10) ++width;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "P%0*zu", width, index + 1);
    return buf;
}

}  // namespace

GeneratorSpec funnel_fixture_spec() {
    GeneratorSpec spec;
    spec.size = 1040;
    spec.signal = SignalPlacement::Split;
    spec.signal_strength = 2.5;
    spec.noiseless = false;
    spec.at_risk_fraction = 0.45;
    spec.outcome_failures = 576;  // 1040 - 464
    spec.missing_failures = 99;   // 464 - 365
    spec.domain_failures = 8;     // 365 - 357
    return spec;
}

std::vector<RawPatientRecord> synthesize_cohort(const GeneratorSpec& spec, std::uint64_t seed) {
    std::size_t failures = spec.outcome_failures + spec.missing_failures + spec.domain_failures;
    if (failures >= spec.size) {
        throw std::invalid_argument("generator: failure quotas leave no clean records");
    }
    std::size_t n_clean = spec.size - failures;
    if (!(spec.at_risk_fraction > 0.0 && spec.at_risk_fraction < 1.0)) {
        throw std::invalid_argument("generator: at_risk_fraction must be in (0, 1)");
    }
    std::size_t n_at_risk = static_cast<std::size_t>(
        std::floor(spec.at_risk_fraction * static_cast<double>(n_clean) + 0.5));
    if (n_at_risk == 0 || n_at_risk == n_clean) {
        throw std::invalid_argument("infeasible balance target");
    }

    // Role per record, shuffled so the CSV is not sorted by fate.
    std::vector<Role> roles;
    roles.reserve(spec.size);
    roles.insert(roles.end(), n_clean, Role::Clean);
    roles.insert(roles.end(), spec.outcome_failures, Role::OutcomeFail);
    roles.insert(roles.end(), spec.missing_failures, Role::MissingFail);
    roles.insert(roles.end(), spec.domain_failures, Role::DomainFail);
    {
        RngStream role_rng(derive_seed(seed, kRolesTag), 0);
        role_rng.shuffle(roles);
    }

    RngStream value_rng(derive_seed(seed, kValuesTag), 0);
    const Date base_date{std::chrono::year{2015}, std::chrono::month{1}, std::chrono::day{1}};

    std::vector<RawPatientRecord> records(spec.size);
    std::vector<std::size_t> clean_indices;
    for (std::size_t i = 0; i < spec.size; ++i) {
        records[i].id = record_id(i, spec.size);
        records[i].values = draw_record_values(value_rng);
        records[i].characterization_date =
            offset_date(base_date, static_cast<long>(value_rng.next_below(365)));
        if (roles[i] == Role::Clean) clean_indices.push_back(i);
    }

    // Labels for the clean subset, exact class balance by construction.
    std::vector<int> labels(spec.size, kNotAtRisk);
    if (spec.noiseless) {
        // top-scoring records are at risk; the boundary is a pure function
        // of the signal features
        std::vector<std::size_t> order = clean_indices;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return risk_score(records[a].values, spec.signal, spec.signal_strength) >
                   risk_score(records[b].values, spec.signal, spec.signal_strength);
        });
        for (std::size_t r = 0; r < n_at_risk; ++r) labels[order[r]] = kAtRisk;
    } else {
        RngStream label_rng(derive_seed(seed, kLabelsTag), 0);
        std::vector<double> prob(spec.size, 0.0);
        std::size_t positives = 0;
        double intercept = logit(spec.at_risk_fraction);
        for (std::size_t i : clean_indices) {
            prob[i] = sigmoid(intercept +
                              risk_score(records[i].values, spec.signal, spec.signal_strength));
            if (label_rng.next_uniform() < prob[i]) {
                labels[i] = kAtRisk;
                ++positives;
            }
        }
        // Meet the quota by flipping the most marginal records first.
        if (positives > n_at_risk) {
            std::vector<std::size_t> ones;
            for (std::size_t i : clean_indices) {
                if (labels[i] == kAtRisk) ones.push_back(i);
            }
            std::stable_sort(ones.begin(), ones.end(),
                             [&](std::size_t a, std::size_t b) { return prob[a] < prob[b]; });
            for (std::size_t r = 0; r < positives - n_at_risk; ++r) labels[ones[r]] = kNotAtRisk;
        } else if (positives < n_at_risk) {
            std::vector<std::size_t> zeros;
            for (std::size_t i : clean_indices) {
                if (labels[i] == kNotAtRisk) zeros.push_back(i);
            }
            std::stable_sort(zeros.begin(), zeros.end(),
                             [&](std::size_t a, std::size_t b) { return prob[a] > prob[b]; });
            for (std::size_t r = 0; r < n_at_risk - positives; ++r) labels[zeros[r]] = kAtRisk;
        }
    }

    // Outcome dates encode each record's fate for the funnel and labeler.
    RngStream outcome_rng(derive_seed(seed, kOutcomesTag), 0);
    RngStream fault_rng(derive_seed(seed, kFaultsTag), 0);
    std::size_t domain_fault_counter = 0;
    for (std::size_t i = 0; i < spec.size; ++i) {
        RawPatientRecord& r = records[i];
        const Date& cdate = r.characterization_date;
        switch (roles[i]) {
            case Role::Clean: {
                if (labels[i] == kAtRisk) {
                    // died within the three-year horizon
                    r.death_date =
                        offset_date(cdate, 30 + static_cast<long>(outcome_rng.next_below(1066)));
                } else if (outcome_rng.next_uniform() < 0.8) {
                    // censored with adequate follow-up
                    r.last_followup_date = offset_date(
                        cdate, 1095 + static_cast<long>(outcome_rng.next_below(1106)));
                } else {
                    // died, but after the horizon
                    r.death_date = offset_date(
                        cdate, 1096 + static_cast<long>(outcome_rng.next_below(1105)));
                }
                break;
            }
            case Role::OutcomeFail: {
                if (outcome_rng.next_uniform() < 0.5) {
                    // no outcome information at all
                } else {
                    // censored too early to label
                    r.last_followup_date = offset_date(
                        cdate, 100 + static_cast<long>(outcome_rng.next_below(995)));
                }
                break;
            }
            case Role::MissingFail: {
                r.last_followup_date =
                    offset_date(cdate, 1095 + static_cast<long>(outcome_rng.next_below(1106)));
                std::size_t n_missing = 1 + fault_rng.next_below(3);
                const auto& features = default_schema().features;
                std::vector<std::size_t> order(features.size());
                std::iota(order.begin(), order.end(), 0);
                fault_rng.shuffle(order);
                for (std::size_t m = 0; m < n_missing; ++m) {
                    r.values.erase(features[order[m]].name);
                }
                break;
            }
            case Role::DomainFail: {
                r.last_followup_date =
                    offset_date(cdate, 1095 + static_cast<long>(outcome_rng.next_below(1106)));
                switch (domain_fault_counter++ % 4) {
                    case 0: r.values["EF"] = 999.0; break;
                    case 1: r.values["NYHA"] = std::string("2.5"); break;  // placeholder class
                    case 2: r.values["Sex"] = 3.0; break;
                    case 3: r.values["TAPSE"] = -5.0; break;
                }
                break;
            }
        }
    }
    return records;
}

}  // namespace hfstrat
