#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hfstrat/classifier.hpp"
#include "hfstrat/rng.hpp"

namespace hfstrat {

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Per-class seeded shuffle, then round-half-up(fraction * class_count)
/// indices of each class to test.
SplitIndices stratified_split(const std::vector<int>& y, double test_fraction,
                              std::uint64_t seed);

struct FoldPlan {
    std::vector<std::vector<std::size_t>> folds;

    std::size_t k() const { return folds.size(); }
    /// Every index outside fold f, ascending.
    std::vector<std::size_t> train_indices(std::size_t f) const;
};

/// Per-class seeded shuffle, then round-robin assignment; the round-robin
/// counter carries across classes so fold sizes differ by at most one.
FoldPlan stratified_kfold(const std::vector<int>& y, std::size_t k, std::uint64_t seed);

using HyperValue = std::variant<std::int64_t, double, std::string>;
using ParamSet = std::map<std::string, HyperValue>;

std::string to_string(const HyperValue& v);

/// Typed lookups; throw std::invalid_argument on a missing key or a value of
/// the wrong shape. hyper_depth reads the string "none" as no limit.
double hyper_double(const ParamSet& params, const std::string& key);
std::int64_t hyper_int(const ParamSet& params, const std::string& key);
std::string hyper_string(const ParamSet& params, const std::string& key);
std::optional<int> hyper_depth(const ParamSet& params, const std::string& key);

/// Hyperparameter axes in declared order; candidates enumerate with the
/// last axis fastest, which fixes the tie-break order.
struct GridSpec {
    std::vector<std::pair<std::string, std::vector<HyperValue>>> axes;

    bool empty() const { return axes.empty(); }
    std::size_t candidate_count() const;
    ParamSet candidate(std::size_t index) const;
};

struct GridCandidate {
    ParamSet params;
    std::vector<double> fold_accuracies;
    double mean_accuracy = 0.0;
    bool valid = true;
    std::string error;  // set when invalid
};

struct GridResult {
    std::vector<GridCandidate> candidates;
    std::size_t winner_index = 0;
    ClassifierPtr model;  // winner retrained on all data

    const GridCandidate& winner() const { return candidates[winner_index]; }
};

/// Builds a model from data, hyperparameters, and a dedicated rng stream
/// (stochastic trainers draw from it; deterministic ones ignore it).
using TrainerFn =
    std::function<ClassifierPtr(const Matrix&, const std::vector<int>&, const ParamSet&, RngHandle)>;

/// Exhaustive search maximizing mean k-fold CV accuracy. Folds are shared
/// across candidates; each (candidate, fold) pair trains on its own rng
/// stream so evaluation order cannot matter. A trainer failure invalidates
/// just that candidate; all candidates failing is an error. The winner
/// (first maximum) is retrained on all of (x, y).
GridResult grid_search(const TrainerFn& trainer, const GridSpec& grid, const Matrix& x,
                       const std::vector<int>& y, std::size_t k, std::uint64_t seed);

std::string grid_result_json(const GridResult& result, const std::string& model_name);

}  // namespace hfstrat
