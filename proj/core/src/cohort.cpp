#include "hfstrat/cohort.hpp"

#include <charconv>
#include <stdexcept>

namespace hfstrat {

std::optional<Date> parse_date(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    int y = 0, m = 0, d = 0;
    auto num = [](const char* first, const char* last, int& out) {
        auto [p, ec] = std::from_chars(first, last, out);
        return ec == std::errc{} && p == last;
    };
    if (!num(s.data(), s.data() + 4, y) || !num(s.data() + 5, s.data() + 7, m) ||
        !num(s.data() + 8, s.data() + 10, d)) {
        return std::nullopt;
    }
    Date ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
             std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return ymd;
}

std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

long days_between(const Date& from, const Date& to) {
    using std::chrono::sys_days;
    return (sys_days(to) - sys_days(from)).count();
}

std::optional<Lifespan> derive_lifespan(const RawPatientRecord& r) {
    if (r.death_date) {
        return Lifespan{days_between(r.characterization_date, *r.death_date), false};
    }
    if (r.last_followup_date) {
        return Lifespan{days_between(r.characterization_date, *r.last_followup_date), true};
    }
    return std::nullopt;
}

int assign_label(long lifespan_days, bool censored, const PreprocessConfig& cfg) {
    if (!censored) {
        return lifespan_days <= cfg.label_threshold_days ? kAtRisk : kNotAtRisk;
    }
    if (lifespan_days < cfg.min_followup_days) {
        throw std::logic_error("assign_label: censored record below follow-up floor "
                               "reached labeling");
    }
    return kNotAtRisk;
}

LabeledCohort preprocess(const std::vector<RawPatientRecord>& records,
                         const CohortSchema& schema, const PreprocessConfig& cfg) {
    if (cfg.label_threshold_days <= 0 || cfg.min_followup_days <= 0) {
        throw std::invalid_argument("preprocess: thresholds must be positive");
    }

    LabeledCohort out;
    out.schema = schema;

    // Step 1: lifespan derivation. Nothing is dropped here.
    struct Staged {
        const RawPatientRecord* rec;
        Lifespan life;
    };
    std::vector<Staged> staged;
    staged.reserve(records.size());
    std::vector<std::optional<Lifespan>> lifespans;
    lifespans.reserve(records.size());
    for (const auto& r : records) lifespans.push_back(derive_lifespan(r));
    out.funnel.push_back({"lifespan_derivation", records.size()});

    // Step 2: keep records with death information or long enough follow-up.
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& life = lifespans[i];
        if (!life) continue;
        if (!life->censored || life->days >= cfg.min_followup_days) {
            staged.push_back({&records[i], *life});
        }
    }
    out.funnel.push_back({"outcome_retention", staged.size()});

    // Step 3: drop records with any missing schema feature.
    std::vector<Staged> complete;
    complete.reserve(staged.size());
    for (const auto& s : staged) {
        bool missing = false;
        for (const auto& f : schema.features) {
            if (!s.rec->values.contains(f.name)) {
                missing = true;
                break;
            }
        }
        if (!missing) complete.push_back(s);
    }
    out.funnel.push_back({"missing_removal", complete.size()});

    // Step 4: drop records with out-of-domain values (inconsistent values and
    // classification placeholders alike).
    std::vector<Staged> clean;
    clean.reserve(complete.size());
    for (const auto& s : complete) {
        bool ok = true;
        for (const auto& f : schema.features) {
            if (!f.in_domain(s.rec->values.at(f.name))) {
                ok = false;
                break;
            }
        }
        if (ok) clean.push_back(s);
    }
    out.funnel.push_back({"domain_removal", clean.size()});

    if (clean.empty()) {
        throw std::runtime_error("cohort exhausted by preprocessing");
    }

    // Step 5: labeling.
    for (const auto& s : clean) {
        out.records.push_back(*s.rec);
        out.lifespans.push_back(s.life.days);
        out.censored.push_back(s.life.censored);
        out.labels.push_back(assign_label(s.life.days, s.life.censored, cfg));
    }
    return out;
}

}  // namespace hfstrat
