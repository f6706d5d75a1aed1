#pragma once

#include <filesystem>
#include <optional>

#include "hfstrat/config.hpp"
#include "hfstrat/stacking.hpp"
#include "hfstrat/synth.hpp"

namespace hfstrat {

/// Everything a pipeline run needs, resolved from one config file. A seed
/// passed on the command line overrides the config's.
struct ExperimentConfig {
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 0;
    double test_fraction = 0.2;
    std::optional<std::filesystem::path> schema_path;  // absent: built-in schema
    PreprocessConfig preprocess;
    std::optional<GeneratorSpec> generator;
    StackingConfig stacking;     // grids filled from [grid.*] sections
    GridSpec tree_grid;          // decision-tree baseline
    GridSpec svc_grid;           // SVC baseline

    const CohortSchema& schema() const;

    static ExperimentConfig from_file(const std::filesystem::path& path,
                                      std::optional<std::uint64_t> seed_override = {});
    static ExperimentConfig from_config(const ConfigFile& file,
                                        std::optional<std::uint64_t> seed_override = {});
};

/// Parses one grid axis value: integer, then real, else kept verbatim
/// (e.g. "none", "linear").
HyperValue parse_hyper_value(const std::string& text);

}  // namespace hfstrat
