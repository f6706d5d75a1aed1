#pragma once

#include <string>
#include <vector>

namespace hfstrat {

struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + tn + fp + fn; }
    bool any_zero_cell() const { return tp == 0 || tn == 0 || fp == 0 || fn == 0; }
};

ConfusionMatrix confusion(const std::vector<int>& truth, const std::vector<int>& predicted);

/// Percentages in [0, 100]; diagnostic odds ratio unitless.
double accuracy(const ConfusionMatrix& cm);
double precision(const ConfusionMatrix& cm);     // 0 with undefined flag when tp+fp == 0
double sensitivity(const ConfusionMatrix& cm);   // 0 with undefined flag when tp+fn == 0
double f1_score(const ConfusionMatrix& cm);
/// Haldane-Anscombe: +0.5 to every cell iff any cell is zero.
double diagnostic_odds_ratio(const ConfusionMatrix& cm);

/// Round-half-up to integer percent, as reported tables display them.
int display_percent(double pct);

struct MetricsReport {
    ConfusionMatrix cm;
    double accuracy_pct = 0.0;
    double precision_pct = 0.0;
    double sensitivity_pct = 0.0;
    double f1_pct = 0.0;
    double dor = 0.0;
    bool precision_undefined = false;
    bool sensitivity_undefined = false;
    bool f1_undefined = false;
    bool dor_corrected = false;  // Haldane-Anscombe applied
};

MetricsReport evaluate(const std::vector<int>& truth, const std::vector<int>& predicted);
MetricsReport evaluate(const ConfusionMatrix& cm);

struct ModelScore {
    std::string name;
    MetricsReport report;
};

std::string comparison_json(const std::vector<ModelScore>& scores);
/// Fixed-width table, one row per model, display-rounded columns.
std::string comparison_text(const std::vector<ModelScore>& scores);

std::string metrics_json(const MetricsReport& report);

}  // namespace hfstrat
