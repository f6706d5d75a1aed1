#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hfstrat/experiment.hpp"
#include "hfstrat/metrics.hpp"
#include "hfstrat/svc.hpp"

namespace hfstrat {

/// Canonical artifact locations under the experiment's output directory.
struct PipelinePaths {
    std::filesystem::path root;

    std::filesystem::path cohort_csv() const { return root / "cohort.csv"; }
    std::filesystem::path labeled_csv() const { return root / "labeled.csv"; }
    std::filesystem::path funnel_json(const std::filesystem::path& labeled) const;
    std::filesystem::path split_json() const { return root / "split.json"; }
    std::filesystem::path models_dir() const { return root / "models"; }
    std::filesystem::path ensemble_json() const { return models_dir() / "ensemble.json"; }
    std::filesystem::path tree_json() const { return models_dir() / "tree.json"; }
    std::filesystem::path svc_json() const { return models_dir() / "svc.json"; }
    std::filesystem::path grid_json(const std::string& name) const {
        return models_dir() / ("grid_" + name + ".json");
    }
    std::filesystem::path comparison_json() const { return root / "comparison.json"; }
    std::filesystem::path comparison_txt() const { return root / "comparison.txt"; }
    std::filesystem::path manifest_json() const { return root / "manifest.json"; }
};

/// Every file a command writes, recorded with its content hash.
void write_manifest(const ExperimentConfig& cfg, const std::string& command,
                    const std::vector<std::filesystem::path>& artifacts);

std::filesystem::path run_synth(const ExperimentConfig& cfg,
                                std::optional<std::filesystem::path> out = {});

struct PreprocessResult {
    LabeledCohort cohort;
    std::filesystem::path labeled_path;
    std::filesystem::path funnel_path;
};
PreprocessResult run_preprocess(const ExperimentConfig& cfg,
                                std::optional<std::filesystem::path> in = {},
                                std::optional<std::filesystem::path> out = {});

struct TrainResult {
    SplitIndices split;
    StackingTrainResult stacking;
    GridResult tree_grid;
    GridResult svc_grid;
    std::filesystem::path ensemble_path;
};
TrainResult run_train(const ExperimentConfig& cfg,
                      std::optional<std::filesystem::path> in = {});

inline const std::vector<std::string> kCompareModels = {"meta", "clinical", "echo",
                                                        "forest", "tree", "svc"};

struct CompareResult {
    std::vector<ModelScore> scores;
    std::string json;
    std::string text;
};
/// Evaluates the requested models on the persisted test split only; refuses
/// schema-hash mismatches and any train/test overlap.
CompareResult run_compare(const ExperimentConfig& cfg,
                          std::optional<std::filesystem::path> in = {},
                          std::vector<std::string> models = kCompareModels);

/// Scores one record (a JSON object of feature values) with a serialized
/// ensemble. A wholly absent feature group takes the degraded path; partial
/// groups and out-of-domain values are validation errors naming the field.
std::string run_predict(const std::filesystem::path& model_path,
                        const std::filesystem::path& record_path, const CohortSchema& schema);

}  // namespace hfstrat
