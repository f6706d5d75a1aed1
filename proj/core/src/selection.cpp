#include "hfstrat/selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hfstrat/log.hpp"
#include "hfstrat/metrics.hpp"
#include "nlohmann/json.hpp"

namespace hfstrat {
namespace {

// Class ids in order of first appearance, with member indices in row order.
std::vector<std::pair<int, std::vector<std::size_t>>> group_by_class(const std::vector<int>& y) {
    std::vector<std::pair<int, std::vector<std::size_t>>> groups;
    for (std::size_t i = 0; i < y.size(); ++i) {
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const auto& g) { return g.first == y[i]; });
        if (it == groups.end()) {
            groups.emplace_back(y[i], std::vector<std::size_t>{i});
        } else {
            it->second.push_back(i);
        }
    }
    return groups;
}

std::size_t round_half_up(double v) {
    return static_cast<std::size_t>(std::floor(v + 0.5));
}

}  // namespace

SplitIndices stratified_split(const std::vector<int>& y, double test_fraction,
                              std::uint64_t seed) {
    if (y.empty()) throw std::invalid_argument("stratified_split: empty labels");
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw std::invalid_argument("stratified_split: test_fraction must be in (0, 1)");

    auto groups = group_by_class(y);
    RngStream rng(seed, 0);
    SplitIndices out;
    for (auto& [cls, members] : groups) {
        rng.shuffle(members);
        std::size_t n_test = round_half_up(test_fraction * static_cast<double>(members.size()));
        if (n_test == 0 || n_test == members.size()) {
            throw std::invalid_argument("stratified_split: class " + std::to_string(cls) +
                                        " would land entirely on one side");
        }
        out.test.insert(out.test.end(), members.begin(), members.begin() + n_test);
        out.train.insert(out.train.end(), members.begin() + n_test, members.end());
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t f) const {
    std::vector<std::size_t> out;
    for (std::size_t g = 0; g < folds.size(); ++g) {
        if (g == f) continue;
        out.insert(out.end(), folds[g].begin(), folds[g].end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

FoldPlan stratified_kfold(const std::vector<int>& y, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("stratified_kfold: k must be at least 2");
    if (y.size() < k) throw std::invalid_argument("stratified_kfold: fewer samples than folds");

    auto groups = group_by_class(y);
    for (const auto& [cls, members] : groups) {
        if (members.size() < k) {
            HFSTRAT_WARN("class %d has %zu samples for %zu folds; some folds miss it", cls,
                         members.size(), k);
        }
    }

    RngStream rng(seed, 0);
    FoldPlan plan;
    plan.folds.assign(k, {});
    std::size_t next_fold = 0;  // carries across classes to balance fold sizes
    for (auto& [cls, members] : groups) {
        (void)cls;
        rng.shuffle(members);
        for (std::size_t idx : members) {
            plan.folds[next_fold].push_back(idx);
            next_fold = (next_fold + 1) % k;
        }
    }
    for (auto& fold : plan.folds) std::sort(fold.begin(), fold.end());
    return plan;
}

std::string to_string(const HyperValue& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&v)) {
        std::string s = std::to_string(*d);
        // trim trailing zeros but keep one decimal ("1.0" not "1.")
        while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
        return s;
    }
    return std::get<std::string>(v);
}

namespace {

const HyperValue& require_key(const ParamSet& params, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) throw std::invalid_argument("missing hyperparameter '" + key + "'");
    return it->second;
}

}  // namespace

double hyper_double(const ParamSet& params, const std::string& key) {
    const HyperValue& v = require_key(params, key);
    if (const auto* d = std::get_if<double>(&v)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    throw std::invalid_argument("hyperparameter '" + key + "' is not numeric");
}

std::int64_t hyper_int(const ParamSet& params, const std::string& key) {
    const HyperValue& v = require_key(params, key);
    if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
    throw std::invalid_argument("hyperparameter '" + key + "' is not an integer");
}

std::string hyper_string(const ParamSet& params, const std::string& key) {
    const HyperValue& v = require_key(params, key);
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    throw std::invalid_argument("hyperparameter '" + key + "' is not a string");
}

std::optional<int> hyper_depth(const ParamSet& params, const std::string& key) {
    const HyperValue& v = require_key(params, key);
    if (const auto* s = std::get_if<std::string>(&v)) {
        if (*s == "none") return std::nullopt;
        throw std::invalid_argument("hyperparameter '" + key + "': expected integer or 'none'");
    }
    std::int64_t depth = hyper_int(params, key);
    if (depth < 1) throw std::invalid_argument("hyperparameter '" + key + "' must be positive");
    return static_cast<int>(depth);
}

std::size_t GridSpec::candidate_count() const {
    std::size_t n = 1;
    for (const auto& [name, values] : axes) {
        if (values.empty()) throw std::invalid_argument("grid axis '" + name + "' has no values");
        n *= values.size();
    }
    return n;
}

ParamSet GridSpec::candidate(std::size_t index) const {
    ParamSet params;
    // last axis varies fastest
    for (std::size_t a = axes.size(); a-- > 0;) {
        const auto& [name, values] = axes[a];
        params[name] = values[index % values.size()];
        index /= values.size();
    }
    if (index != 0) throw std::out_of_range("grid candidate index out of range");
    return params;
}

GridResult grid_search(const TrainerFn& trainer, const GridSpec& grid, const Matrix& x,
                       const std::vector<int>& y, std::size_t k, std::uint64_t seed) {
    if (x.rows() != y.size()) throw std::invalid_argument("grid_search: row/label mismatch");
    FoldPlan plan = stratified_kfold(y, k, seed);
    std::size_t n_candidates = grid.candidate_count();

    GridResult result;
    result.candidates.reserve(n_candidates);
    bool any_valid = false;
    double best = -1.0;

    for (std::size_t ci = 0; ci < n_candidates; ++ci) {
        GridCandidate cand;
        cand.params = grid.candidate(ci);
        double total = 0.0;
        for (std::size_t f = 0; f < k && cand.valid; ++f) {
            auto train_idx = plan.train_indices(f);
            Matrix x_train = x.select_rows(train_idx);
            std::vector<int> y_train = select(y, train_idx);
            Matrix x_test = x.select_rows(plan.folds[f]);
            std::vector<int> y_test = select(y, plan.folds[f]);
            RngHandle stream{seed, (ci + 1) * 1024 + f};
            try {
                ClassifierPtr model = trainer(x_train, y_train, cand.params, stream);
                double acc = accuracy(confusion(y_test, model->predict_labels(x_test)));
                cand.fold_accuracies.push_back(acc);
                total += acc;
            } catch (const std::exception& e) {
                cand.valid = false;
                cand.error = e.what();
                HFSTRAT_WARN("grid candidate %zu invalid: %s", ci, e.what());
            }
        }
        if (cand.valid) {
            cand.mean_accuracy = total / static_cast<double>(k);
            if (!any_valid || cand.mean_accuracy > best) {  // first max wins ties
                any_valid = true;
                best = cand.mean_accuracy;
                result.winner_index = ci;
            }
        }
        result.candidates.push_back(std::move(cand));
    }
    if (!any_valid) throw std::runtime_error("grid_search: every candidate failed");

    RngHandle final_stream{seed, (result.winner_index + 1) * 1024 + 1023};
    result.model = trainer(x, y, result.candidates[result.winner_index].params, final_stream);
    return result;
}

std::string grid_result_json(const GridResult& result, const std::string& model_name) {
    nlohmann::ordered_json doc;
    doc["model"] = model_name;
    doc["winner_index"] = result.winner_index;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [key, value] : result.winner().params) params[key] = to_string(value);
    doc["winner_params"] = params;
    doc["winner_mean_accuracy"] = result.winner().mean_accuracy;
    nlohmann::ordered_json cands = nlohmann::ordered_json::array();
    for (const auto& cand : result.candidates) {
        nlohmann::ordered_json c;
        nlohmann::ordered_json p = nlohmann::ordered_json::object();
        for (const auto& [key, value] : cand.params) p[key] = to_string(value);
        c["params"] = p;
        c["valid"] = cand.valid;
        if (cand.valid) {
            c["fold_accuracies"] = cand.fold_accuracies;
            c["mean_accuracy"] = cand.mean_accuracy;
        } else {
            c["error"] = cand.error;
        }
        cands.push_back(std::move(c));
    }
    doc["candidates"] = std::move(cands);
    return doc.dump(2) + "\n";
}

}  // namespace hfstrat
