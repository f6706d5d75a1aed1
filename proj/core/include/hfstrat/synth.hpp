#pragma once

#include <cstdint>
#include <vector>

#include "hfstrat/cohort.hpp"

namespace hfstrat {

enum class SignalPlacement { ClinicalOnly, EchoOnly, Split };

std::string to_string(SignalPlacement p);
SignalPlacement signal_placement_from_string(const std::string& s);

/// Synthetic cohort recipe: independent per-feature marginals, a logistic
/// outcome score over a small signal subset (EF/Age/BMI clinically,
/// TAPSE/LVMI/ASx echocardiographically), and quota-controlled
/// preprocessing failures so funnel counts are exact by construction.
struct GeneratorSpec {
    std::size_t size = 400;             // total records, failures included
    SignalPlacement signal = SignalPlacement::Split;
    double signal_strength = 2.5;       // logit-scale weight of the signal score
    bool noiseless = false;             // true: labels threshold the score exactly
    double at_risk_fraction = 0.45;     // class balance among funnel survivors
    std::size_t outcome_failures = 0;   // removed by outcome retention
    std::size_t missing_failures = 0;   // removed by the missing-value filter
    std::size_t domain_failures = 0;    // removed by the domain filter
};

/// Deterministic under (spec, seed): two runs produce identical records,
/// hence byte-identical CSVs. Throws on an infeasible balance target.
std::vector<RawPatientRecord> synthesize_cohort(const GeneratorSpec& spec, std::uint64_t seed);

/// The 1040-record recipe whose funnel is 1040 -> 464 -> 365 -> 357 with
/// 161 of the 357 survivors labeled at-risk.
GeneratorSpec funnel_fixture_spec();

}  // namespace hfstrat
