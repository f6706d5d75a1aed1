#pragma once

#include <optional>
#include <vector>

#include "hfstrat/classifier.hpp"
#include "hfstrat/rng.hpp"

namespace hfstrat {

/// Gini impurity 1 - p0^2 - p1^2 of a nonempty 0/1 label multiset.
double gini(const std::vector<int>& labels);

struct TreeParams {
    std::optional<int> max_depth;  // nullopt = unlimited
    int min_samples_split = 2;
    int min_samples_leaf = 1;
};

struct TreeNode {
    int column = -1;         // -1 marks a leaf
    double threshold = 0.0;  // x[column] < threshold goes left
    int left = -1;
    int right = -1;
    double p1 = 0.0;         // leaf probability of class 1
    int count = 0;

    bool is_leaf() const { return column < 0; }
};

/// Greedy CART classifier. Split candidates are midpoints of consecutive
/// distinct sorted values; ties break to the lowest column, then the lowest
/// threshold, so training is fully deterministic.
class DecisionTreeModel final : public Classifier {
public:
    DecisionTreeModel() = default;
    DecisionTreeModel(std::vector<TreeNode> nodes, TreeParams params)
        : nodes_(std::move(nodes)), params_(params) {}

    double confidence(std::span<const double> x) const override;

    const std::vector<TreeNode>& nodes() const { return nodes_; }
    const TreeParams& params() const { return params_; }
    int depth() const;

private:
    std::vector<TreeNode> nodes_;
    TreeParams params_;
};

/// Trains a tree on (x, y). In forest mode (`feature_subset_size` set) each
/// split draws that many candidate columns without replacement from `rng`.
DecisionTreeModel train_tree(const Matrix& x, const std::vector<int>& y,
                             const TreeParams& params, RngStream* rng = nullptr,
                             std::optional<std::size_t> feature_subset_size = std::nullopt);

struct ForestParams {
    int n_trees = 100;
    std::optional<int> max_depth;
    int min_samples_leaf = 1;
    std::optional<std::size_t> features_per_split;  // default ceil(sqrt(cols))
    bool bootstrap = true;
};

/// Bagged CART ensemble. Tree t draws its bootstrap sample and feature
/// subsets from rng stream t of the forest seed, so results are identical
/// whether trees are built sequentially or in parallel.
class RandomForestModel final : public Classifier {
public:
    RandomForestModel() = default;
    RandomForestModel(std::vector<DecisionTreeModel> trees, ForestParams params,
                      std::uint64_t seed)
        : trees_(std::move(trees)), params_(params), seed_(seed) {}

    /// Fraction of trees whose leaf majority votes class 1.
    double confidence(std::span<const double> x) const override;

    const std::vector<DecisionTreeModel>& trees() const { return trees_; }
    const ForestParams& params() const { return params_; }
    std::uint64_t seed() const { return seed_; }

private:
    std::vector<DecisionTreeModel> trees_;
    ForestParams params_;
    std::uint64_t seed_ = 0;
};

RandomForestModel train_forest(const Matrix& x, const std::vector<int>& y,
                               const ForestParams& params, std::uint64_t seed);

}  // namespace hfstrat
