#include "hfstrat/trainers.hpp"

#include <memory>
#include <stdexcept>

namespace hfstrat {

LogisticModel logistic_from_params(const Matrix& x, const std::vector<int>& y,
                                   const ParamSet& params) {
    LogisticTrainConfig cfg;
    cfg.c = hyper_double(params, "C");
    return train_logistic(x, y, cfg);
}

DecisionTreeModel tree_from_params(const Matrix& x, const std::vector<int>& y,
                                   const ParamSet& params) {
    TreeParams tp;
    tp.max_depth = hyper_depth(params, "max_depth");
    tp.min_samples_split = static_cast<int>(hyper_int(params, "min_samples_split"));
    return train_tree(x, y, tp);
}

RandomForestModel forest_from_params(const Matrix& x, const std::vector<int>& y,
                                     const ParamSet& params, RngHandle rng) {
    ForestParams fp;
    fp.n_trees = static_cast<int>(hyper_int(params, "n_trees"));
    fp.max_depth = hyper_depth(params, "max_depth");
    fp.min_samples_leaf = static_cast<int>(hyper_int(params, "min_samples_leaf"));
    if (params.count("features_per_split")) {  // optional axis; absent -> ceil(sqrt(cols))
        fp.features_per_split = static_cast<std::size_t>(hyper_int(params, "features_per_split"));
    }
    // collapse the handle into the forest's single seed; per-tree streams
    // derive from it inside train_forest
    return train_forest(x, y, fp, derive_seed(rng.seed, rng.stream_id));
}

SvcModel svc_from_params(const Matrix& x, const std::vector<int>& y, const ParamSet& params) {
    SvcTrainConfig cfg;
    cfg.c = hyper_double(params, "C");
    std::string kernel = hyper_string(params, "kernel");
    if (kernel == "linear") {
        cfg.kernel = SvcKernel::Linear;
    } else if (kernel == "rbf") {
        cfg.kernel = SvcKernel::Rbf;
    } else {
        throw std::invalid_argument("unknown kernel '" + kernel + "'");
    }
    return train_svc(x, y, cfg);
}

TrainerFn logistic_trainer() {
    return [](const Matrix& x, const std::vector<int>& y, const ParamSet& p, RngHandle) {
        return ClassifierPtr(new LogisticModel(logistic_from_params(x, y, p)));
    };
}

TrainerFn tree_trainer() {
    return [](const Matrix& x, const std::vector<int>& y, const ParamSet& p, RngHandle) {
        return ClassifierPtr(new DecisionTreeModel(tree_from_params(x, y, p)));
    };
}

TrainerFn forest_trainer() {
    return [](const Matrix& x, const std::vector<int>& y, const ParamSet& p, RngHandle rng) {
        return ClassifierPtr(new RandomForestModel(forest_from_params(x, y, p, rng)));
    };
}

TrainerFn svc_trainer() {
    return [](const Matrix& x, const std::vector<int>& y, const ParamSet& p, RngHandle) {
        return ClassifierPtr(new SvcModel(svc_from_params(x, y, p)));
    };
}

GridSpec default_logistic_grid() {
    GridSpec g;
    g.axes.push_back({"C", {HyperValue{0.01}, HyperValue{0.1}, HyperValue{1.0}, HyperValue{10.0},
                            HyperValue{100.0}}});
    return g;
}

GridSpec default_tree_grid() {
    GridSpec g;
    g.axes.push_back({"max_depth", {HyperValue{std::int64_t{2}}, HyperValue{std::int64_t{3}},
                                    HyperValue{std::int64_t{4}}, HyperValue{std::int64_t{5}},
                                    HyperValue{std::string{"none"}}}});
    g.axes.push_back({"min_samples_split", {HyperValue{std::int64_t{2}}, HyperValue{std::int64_t{5}},
                                            HyperValue{std::int64_t{10}}}});
    return g;
}

GridSpec default_forest_grid() {
    GridSpec g;
    g.axes.push_back({"n_trees", {HyperValue{std::int64_t{100}}, HyperValue{std::int64_t{300}}}});
    g.axes.push_back({"max_depth", {HyperValue{std::int64_t{3}}, HyperValue{std::int64_t{5}},
                                    HyperValue{std::string{"none"}}}});
    g.axes.push_back(
        {"min_samples_leaf", {HyperValue{std::int64_t{1}}, HyperValue{std::int64_t{3}}}});
    return g;
}

GridSpec default_svc_grid() {
    GridSpec g;
    g.axes.push_back({"C", {HyperValue{0.1}, HyperValue{1.0}, HyperValue{10.0}}});
    g.axes.push_back({"kernel", {HyperValue{std::string{"linear"}}, HyperValue{std::string{"rbf"}}}});
    return g;
}

}  // namespace hfstrat
