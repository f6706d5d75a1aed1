#include "hfstrat/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "nlohmann/json.hpp"

namespace hfstrat {

ConfusionMatrix confusion(const std::vector<int>& truth, const std::vector<int>& predicted) {
    if (truth.size() != predicted.size())
        throw std::invalid_argument("confusion: label vectors differ in length");
    if (truth.empty()) throw std::invalid_argument("confusion: no labels");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if ((truth[i] != 0 && truth[i] != 1) || (predicted[i] != 0 && predicted[i] != 1))
            throw std::invalid_argument("confusion: labels must be 0 or 1");
        if (truth[i] == 1) {
            predicted[i] == 1 ? ++cm.tp : ++cm.fn;
        } else {
            predicted[i] == 1 ? ++cm.fp : ++cm.tn;
        }
    }
    return cm;
}

double accuracy(const ConfusionMatrix& cm) {
    return 100.0 * static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
}

double precision(const ConfusionMatrix& cm) {
    if (cm.tp + cm.fp == 0) return 0.0;
    return 100.0 * static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
}

double sensitivity(const ConfusionMatrix& cm) {
    if (cm.tp + cm.fn == 0) return 0.0;
    return 100.0 * static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
}

double f1_score(const ConfusionMatrix& cm) {
    double p = precision(cm);
    double s = sensitivity(cm);
    if (p + s == 0.0) return 0.0;
    return 2.0 * p * s / (p + s);
}

double diagnostic_odds_ratio(const ConfusionMatrix& cm) {
    double tp = static_cast<double>(cm.tp);
    double tn = static_cast<double>(cm.tn);
    double fp = static_cast<double>(cm.fp);
    double fn = static_cast<double>(cm.fn);
    if (cm.any_zero_cell()) {
        tp += 0.5;
        tn += 0.5;
        fp += 0.5;
        fn += 0.5;
    }
    return (tp * tn) / (fp * fn);
}

int display_percent(double pct) {
    return static_cast<int>(std::floor(pct + 0.5));
}

MetricsReport evaluate(const ConfusionMatrix& cm) {
    MetricsReport r;
    r.cm = cm;
    r.accuracy_pct = accuracy(cm);
    r.precision_pct = precision(cm);
    r.sensitivity_pct = sensitivity(cm);
    r.f1_pct = f1_score(cm);
    r.dor = diagnostic_odds_ratio(cm);
    r.precision_undefined = (cm.tp + cm.fp == 0);
    r.sensitivity_undefined = (cm.tp + cm.fn == 0);
    r.f1_undefined = r.precision_undefined || r.sensitivity_undefined ||
                     (r.precision_pct + r.sensitivity_pct == 0.0);
    r.dor_corrected = cm.any_zero_cell();
    return r;
}

MetricsReport evaluate(const std::vector<int>& truth, const std::vector<int>& predicted) {
    return evaluate(confusion(truth, predicted));
}

namespace {

nlohmann::ordered_json report_to_json(const MetricsReport& r) {
    nlohmann::ordered_json j;
    j["confusion"] = {{"tp", r.cm.tp}, {"tn", r.cm.tn}, {"fp", r.cm.fp}, {"fn", r.cm.fn}};
    j["accuracy_pct"] = r.accuracy_pct;
    j["precision_pct"] = r.precision_pct;
    j["sensitivity_pct"] = r.sensitivity_pct;
    j["f1_pct"] = r.f1_pct;
    j["dor"] = r.dor;
    j["display"] = {{"accuracy", display_percent(r.accuracy_pct)},
                    {"precision", display_percent(r.precision_pct)},
                    {"sensitivity", display_percent(r.sensitivity_pct)},
                    {"f1", display_percent(r.f1_pct)}};
    nlohmann::ordered_json flags = nlohmann::ordered_json::object();
    flags["precision_undefined"] = r.precision_undefined;
    flags["sensitivity_undefined"] = r.sensitivity_undefined;
    flags["f1_undefined"] = r.f1_undefined;
    flags["dor_corrected"] = r.dor_corrected;
    j["flags"] = std::move(flags);
    return j;
}

}  // namespace

std::string metrics_json(const MetricsReport& report) {
    return report_to_json(report).dump(2) + "\n";
}

std::string comparison_json(const std::vector<ModelScore>& scores) {
    nlohmann::ordered_json doc;
    nlohmann::ordered_json models = nlohmann::ordered_json::array();
    for (const auto& score : scores) {
        nlohmann::ordered_json entry;
        entry["name"] = score.name;
        entry["metrics"] = report_to_json(score.report);
        models.push_back(std::move(entry));
    }
    doc["models"] = std::move(models);
    return doc.dump(2) + "\n";
}

std::string comparison_text(const std::vector<ModelScore>& scores) {
    std::size_t name_width = 5;  // "model"
    for (const auto& s : scores) name_width = std::max(name_width, s.name.size());

    std::string out;
    char line[256];
    std::snprintf(line, sizeof(line), "%-*s  %9s  %10s  %12s  %6s  %7s\n",
                  static_cast<int>(name_width), "model", "accuracy", "precision", "sensitivity",
                  "f1", "dor");
    out += line;
    for (const auto& s : scores) {
        const MetricsReport& r = s.report;
        std::snprintf(line, sizeof(line), "%-*s  %8d%%  %9d%%  %11d%%  %5d%%  %7.1f\n",
                      static_cast<int>(name_width), s.name.c_str(),
                      display_percent(r.accuracy_pct), display_percent(r.precision_pct),
                      display_percent(r.sensitivity_pct), display_percent(r.f1_pct), r.dor);
        out += line;
    }
    return out;
}

}  // namespace hfstrat
