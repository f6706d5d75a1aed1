#include "hfstrat/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hfstrat {

double gini(const std::vector<int>& labels) {
    if (labels.empty()) throw std::invalid_argument("gini: empty label set");
    std::size_t ones = 0;
    for (int v : labels) ones += v;
    const double p1 = static_cast<double>(ones) / labels.size();
    const double p0 = 1.0 - p1;
    return 1.0 - p0 * p0 - p1 * p1;
}

namespace {

double gini_counts(std::size_t n0, std::size_t n1) {
    const double n = static_cast<double>(n0 + n1);
    const double p0 = n0 / n;
    const double p1 = n1 / n;
    return 1.0 - p0 * p0 - p1 * p1;
}

struct SplitChoice {
    int column = -1;
    double threshold = 0.0;
    double weighted_impurity = 0.0;
};

class TreeBuilder {
public:
    TreeBuilder(const Matrix& x, const std::vector<int>& y, const TreeParams& params,
                RngStream* rng, std::optional<std::size_t> feature_subset_size)
        : x_(x), y_(y), params_(params), rng_(rng), subset_size_(feature_subset_size) {}

    std::vector<TreeNode> build() {
        std::vector<std::size_t> all(x_.rows());
        std::iota(all.begin(), all.end(), 0);
        grow(all, 0);
        return std::move(nodes_);
    }

private:
    int grow(const std::vector<std::size_t>& idx, int depth) {
        const int node_id = static_cast<int>(nodes_.size());
        nodes_.push_back(make_leaf(idx));

        const std::size_t ones = count_ones(idx);
        const bool pure = ones == 0 || ones == idx.size();
        const bool depth_capped = params_.max_depth && depth >= *params_.max_depth;
        if (pure || depth_capped ||
            idx.size() < static_cast<std::size_t>(params_.min_samples_split)) {
            return node_id;
        }

        const auto choice = best_split(idx, gini_counts(idx.size() - ones, ones));
        if (choice.column < 0) return node_id;  // no impurity-reducing split

        std::vector<std::size_t> left, right;
        for (std::size_t i : idx) {
            (x_(i, choice.column) < choice.threshold ? left : right).push_back(i);
        }
        const int left_id = grow(left, depth + 1);
        const int right_id = grow(right, depth + 1);
        nodes_[node_id].column = choice.column;
        nodes_[node_id].threshold = choice.threshold;
        nodes_[node_id].left = left_id;
        nodes_[node_id].right = right_id;
        return node_id;
    }

    TreeNode make_leaf(const std::vector<std::size_t>& idx) const {
        TreeNode leaf;
        leaf.count = static_cast<int>(idx.size());
        leaf.p1 = static_cast<double>(count_ones(idx)) / idx.size();
        return leaf;
    }

    std::size_t count_ones(const std::vector<std::size_t>& idx) const {
        std::size_t ones = 0;
        for (std::size_t i : idx) ones += y_[i];
        return ones;
    }

    std::vector<std::size_t> candidate_columns() {
        const std::size_t d = x_.cols();
        if (!subset_size_ || *subset_size_ >= d) {
            std::vector<std::size_t> all(d);
            std::iota(all.begin(), all.end(), 0);
            return all;
        }
        if (rng_ == nullptr) {
            throw std::invalid_argument("train_tree: feature subsampling requires an rng");
        }
        // Partial Fisher-Yates, then ascending order for tie-breaking.
        std::vector<std::size_t> pool(d);
        std::iota(pool.begin(), pool.end(), 0);
        for (std::size_t i = 0; i < *subset_size_; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng_->next_below(d - i));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(*subset_size_);
        std::sort(pool.begin(), pool.end());
        return pool;
    }

    SplitChoice best_split(const std::vector<std::size_t>& idx, double parent_impurity) {
        SplitChoice best;
        best.weighted_impurity = parent_impurity;
        const std::size_t n = idx.size();
        const std::size_t min_leaf = static_cast<std::size_t>(params_.min_samples_leaf);

        std::vector<std::pair<double, int>> ordered(n);
        for (const std::size_t col : candidate_columns()) {
            for (std::size_t k = 0; k < n; ++k) {
                ordered[k] = {x_(idx[k], col), y_[idx[k]]};
            }
            std::sort(ordered.begin(), ordered.end());

            std::size_t left_n1 = 0;
            const std::size_t total_n1 = std::accumulate(
                ordered.begin(), ordered.end(), std::size_t{0},
                [](std::size_t a, const auto& p) { return a + p.second; });
            for (std::size_t k = 1; k < n; ++k) {
                left_n1 += ordered[k - 1].second;
                if (ordered[k].first == ordered[k - 1].first) continue;
                if (k < min_leaf || n - k < min_leaf) continue;
                const double w =
                    (k * gini_counts(k - left_n1, left_n1) +
                     (n - k) * gini_counts((n - k) - (total_n1 - left_n1), total_n1 - left_n1)) /
                    n;
                if (w < best.weighted_impurity) {
                    best.weighted_impurity = w;
                    best.column = static_cast<int>(col);
                    best.threshold = (ordered[k - 1].first + ordered[k].first) / 2.0;
                }
            }
        }
        return best;
    }

    const Matrix& x_;
    const std::vector<int>& y_;
    const TreeParams& params_;
    RngStream* rng_;
    std::optional<std::size_t> subset_size_;
    std::vector<TreeNode> nodes_;
};

}  // namespace

double DecisionTreeModel::confidence(std::span<const double> x) const {
    if (nodes_.empty()) throw std::logic_error("decision tree has no nodes");
    int at = 0;
    while (!nodes_[at].is_leaf()) {
        const auto& node = nodes_[at];
        at = x[node.column] < node.threshold ? node.left : node.right;
    }
    return nodes_[at].p1;
}

int DecisionTreeModel::depth() const {
    if (nodes_.empty()) return 0;
    // nodes_ is in preorder; walk recursively.
    struct Walker {
        const std::vector<TreeNode>& nodes;
        int depth_of(int at) const {
            const auto& n = nodes[at];
            if (n.is_leaf()) return 0;
            return 1 + std::max(depth_of(n.left), depth_of(n.right));
        }
    };
    return Walker{nodes_}.depth_of(0);
}

DecisionTreeModel train_tree(const Matrix& x, const std::vector<int>& y,
                             const TreeParams& params, RngStream* rng,
                             std::optional<std::size_t> feature_subset_size) {
    if (x.rows() != y.size()) throw std::invalid_argument("train_tree: size mismatch");
    if (x.rows() == 0) throw std::invalid_argument("train_tree: empty dataset");
    TreeBuilder builder(x, y, params, rng, feature_subset_size);
    return DecisionTreeModel(builder.build(), params);
}

double RandomForestModel::confidence(std::span<const double> x) const {
    if (trees_.empty()) throw std::logic_error("random forest has no trees");
    std::size_t votes = 0;
    for (const auto& tree : trees_) {
        votes += tree.confidence(x) >= 0.5 ? 1 : 0;
    }
    return static_cast<double>(votes) / trees_.size();
}

RandomForestModel train_forest(const Matrix& x, const std::vector<int>& y,
                               const ForestParams& params, std::uint64_t seed) {
    if (params.n_trees < 1) throw std::invalid_argument("train_forest: n_trees must be >= 1");
    if (x.rows() != y.size()) throw std::invalid_argument("train_forest: size mismatch");

    const std::size_t subset = params.features_per_split.value_or(
        static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(x.cols())))));
    TreeParams tree_params;
    tree_params.max_depth = params.max_depth;
    tree_params.min_samples_leaf = params.min_samples_leaf;
    tree_params.min_samples_split = std::max(2, 2 * params.min_samples_leaf);

    std::vector<DecisionTreeModel> trees;
    trees.reserve(params.n_trees);
    for (int t = 0; t < params.n_trees; ++t) {
        RngStream rng(seed, static_cast<std::uint64_t>(t));
        Matrix xt;
        std::vector<int> yt;
        if (params.bootstrap) {
            const auto idx = rng.bootstrap_indices(x.rows());
            xt = x.select_rows(idx);
            yt = select(y, idx);
        } else {
            xt = x;
            yt = y;
        }
        trees.push_back(train_tree(xt, yt, tree_params, &rng, subset));
    }
    return RandomForestModel(std::move(trees), params, seed);
}

}  // namespace hfstrat
