#pragma once

#include "hfstrat/logistic.hpp"
#include "hfstrat/selection.hpp"
#include "hfstrat/svc.hpp"
#include "hfstrat/tree.hpp"

namespace hfstrat {

// Bridges between grid-search ParamSets and the concrete train functions.
// Hyperparameter keys: logistic "C"; tree "max_depth" (int or "none"),
// "min_samples_split"; forest "n_trees", "max_depth", "min_samples_leaf";
// svc "C", "kernel" ("linear" or "rbf").

LogisticModel logistic_from_params(const Matrix& x, const std::vector<int>& y,
                                   const ParamSet& params);
DecisionTreeModel tree_from_params(const Matrix& x, const std::vector<int>& y,
                                   const ParamSet& params);
RandomForestModel forest_from_params(const Matrix& x, const std::vector<int>& y,
                                     const ParamSet& params, RngHandle rng);
SvcModel svc_from_params(const Matrix& x, const std::vector<int>& y, const ParamSet& params);

TrainerFn logistic_trainer();
TrainerFn tree_trainer();
TrainerFn forest_trainer();
TrainerFn svc_trainer();

GridSpec default_logistic_grid();
GridSpec default_tree_grid();
GridSpec default_forest_grid();
GridSpec default_svc_grid();

}  // namespace hfstrat
