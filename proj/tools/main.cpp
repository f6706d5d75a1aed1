#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hfstrat/model_io.hpp"
#include "hfstrat/pipeline.hpp"
#include "hfstrat/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> in_path;
    std::optional<std::string> out_path;
};

hfstrat::ExperimentConfig load_config(const CommonArgs& args) {
    return hfstrat::ExperimentConfig::from_file(args.config_path, args.seed);
}

void add_common(CLI::App* cmd, CommonArgs& args, bool with_in, bool with_out) {
    cmd->add_option("--config", args.config_path, "Experiment config file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", args.seed, "Override the config seed");
    if (with_in) cmd->add_option("--in", args.in_path, "Input file (default from config)");
    if (with_out) cmd->add_option("--out", args.out_path, "Output file (default from config)");
}

std::optional<std::filesystem::path> as_path(const std::optional<std::string>& s) {
    if (!s) return std::nullopt;
    return std::filesystem::path(*s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heart-failure risk stratification: domain-segregated stacking ensemble"};
    app.set_version_flag("--version", std::string(hfstrat::kToolVersion));
    app.require_subcommand(1);

    CommonArgs synth_args, pre_args, train_args, cmp_args;
    std::vector<std::string> cmp_models;
    std::string cmp_format = "text";
    std::string predict_model, predict_record, predict_out, predict_config;

    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic cohort CSV");
    add_common(synth, synth_args, false, true);

    CLI::App* pre = app.add_subcommand("preprocess",
                                       "Run the funnel and label the surviving records");
    add_common(pre, pre_args, true, true);

    CLI::App* train = app.add_subcommand("train",
                                         "Grid-search and train the ensemble and baselines");
    add_common(train, train_args, true, false);

    CLI::App* compare = app.add_subcommand("compare",
                                           "Evaluate trained models on the persisted test split");
    compare->alias("evaluate");
    add_common(compare, cmp_args, true, false);
    compare->add_option("--models", cmp_models,
                        "Subset of meta,clinical,echo,forest,tree,svc (default all)")
        ->delimiter(',');
    compare->add_option("--format", cmp_format, "Console output format")
        ->check(CLI::IsMember({"json", "text"}));

    CLI::App* predict = app.add_subcommand("predict", "Score one record with a saved ensemble");
    predict->add_option("--model", predict_model, "Serialized ensemble JSON")
        ->required()
        ->check(CLI::ExistingFile);
    predict->add_option("--record", predict_record, "JSON object of feature values")
        ->required()
        ->check(CLI::ExistingFile);
    predict->add_option("--config", predict_config, "Config providing the schema (optional)")
        ->check(CLI::ExistingFile);
    predict->add_option("--out", predict_out, "Write the prediction JSON here too");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (synth->parsed()) {
            auto path = hfstrat::run_synth(load_config(synth_args), as_path(synth_args.out_path));
            std::printf("wrote %s\n", path.string().c_str());
        } else if (pre->parsed()) {
            auto result = hfstrat::run_preprocess(load_config(pre_args), as_path(pre_args.in_path),
                                                  as_path(pre_args.out_path));
            std::printf("wrote %s (%zu records) and %s\n", result.labeled_path.string().c_str(),
                        result.cohort.size(), result.funnel_path.string().c_str());
        } else if (train->parsed()) {
            auto result = hfstrat::run_train(load_config(train_args), as_path(train_args.in_path));
            std::printf("wrote %s\n", result.ensemble_path.string().c_str());
        } else if (compare->parsed()) {
            auto models = cmp_models.empty() ? hfstrat::kCompareModels : cmp_models;
            auto result = hfstrat::run_compare(load_config(cmp_args), as_path(cmp_args.in_path),
                                               models);
            std::fputs((cmp_format == "json" ? result.json : result.text).c_str(), stdout);
        } else if (predict->parsed()) {
            const hfstrat::CohortSchema& schema =
                predict_config.empty()
                    ? hfstrat::default_schema()
                    : hfstrat::ExperimentConfig::from_file(predict_config, 0).schema();
            std::string out = hfstrat::run_predict(predict_model, predict_record, schema);
            if (!predict_out.empty()) hfstrat::save_text_file(predict_out, out);
            std::fputs(out.c_str(), stdout);
        }
    } catch (const hfstrat::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return kExitOk;
}
