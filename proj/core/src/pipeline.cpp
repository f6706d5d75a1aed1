#include "hfstrat/pipeline.hpp"

#include <algorithm>
#include <ctime>

#include "hfstrat/cohort_csv.hpp"
#include "hfstrat/hash.hpp"
#include "hfstrat/log.hpp"
#include "hfstrat/model_io.hpp"
#include "hfstrat/trainers.hpp"
#include "hfstrat/version.hpp"
#include "nlohmann/json.hpp"

namespace hfstrat {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// stream tags under the experiment seed
constexpr std::uint64_t kSplitTag = 11;
constexpr std::uint64_t kTreeGridTag = 12;
constexpr std::uint64_t kSvcGridTag = 13;
constexpr std::uint64_t kSynthTag = 14;

std::string utc_now() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json grid_to_json(const GridSpec& grid) {
    json axes = json::array();
    for (const auto& [name, values] : grid.axes) {
        json axis;
        axis["name"] = name;
        json vals = json::array();
        for (const auto& v : values) vals.push_back(to_string(v));
        axis["values"] = std::move(vals);
        axes.push_back(std::move(axis));
    }
    return axes;
}

json config_snapshot(const ExperimentConfig& cfg) {
    json j;
    j["output_dir"] = cfg.output_dir.string();
    j["seed"] = cfg.seed;
    j["test_fraction"] = cfg.test_fraction;
    j["schema"] = cfg.schema_path ? json(cfg.schema_path->string()) : json(nullptr);
    j["preprocess"] = {{"label_threshold_days", cfg.preprocess.label_threshold_days},
                       {"min_followup_days", cfg.preprocess.min_followup_days}};
    if (cfg.generator) {
        json g;
        g["size"] = cfg.generator->size;
        g["signal"] = to_string(cfg.generator->signal);
        g["signal_strength"] = cfg.generator->signal_strength;
        g["noiseless"] = cfg.generator->noiseless;
        g["at_risk_fraction"] = cfg.generator->at_risk_fraction;
        g["outcome_failures"] = cfg.generator->outcome_failures;
        g["missing_failures"] = cfg.generator->missing_failures;
        g["domain_failures"] = cfg.generator->domain_failures;
        j["generator"] = std::move(g);
    } else {
        j["generator"] = nullptr;
    }
    json s;
    s["k"] = cfg.stacking.k;
    s["protocol"] = to_string(cfg.stacking.protocol);
    s["meta_features"] = to_string(cfg.stacking.features);
    j["stacking"] = std::move(s);
    j["grids"] = {{"clinical", grid_to_json(cfg.stacking.clinical_grid)},
                  {"echo", grid_to_json(cfg.stacking.echo_grid)},
                  {"forest", grid_to_json(cfg.stacking.forest_grid)},
                  {"meta", grid_to_json(cfg.stacking.meta_grid)},
                  {"tree", grid_to_json(cfg.tree_grid)},
                  {"svc", grid_to_json(cfg.svc_grid)}};
    return j;
}

std::string file_hash(const fs::path& path) {
    return to_hex(fnv1a64(load_text_file(path)));
}

json params_json(const ParamSet& params) {
    json j = json::object();
    for (const auto& [key, value] : params) j[key] = to_string(value);
    return j;
}

// Baseline model files carry the schema hash and winning hyperparameters
// around the bare model document.
std::string baseline_to_json(const std::string& family, const std::string& schema_hash,
                             const GridCandidate& winner, const std::string& model_doc) {
    json j;
    j["format_version"] = kModelFormatVersion;
    j["model"] = "baseline";
    j["family"] = family;
    j["schema_hash"] = schema_hash;
    j["winner_params"] = params_json(winner.params);
    j["cv_accuracy"] = winner.mean_accuracy;
    j["document"] = json::parse(model_doc);
    return j.dump(2) + "\n";
}

json parse_baseline(const std::string& text, const std::string& family,
                    const std::string& expect_hash) {
    json j = json::parse(text);
    if (j.at("format_version").get<int>() != kModelFormatVersion) {
        throw std::runtime_error("unsupported baseline format version");
    }
    if (j.at("family").get<std::string>() != family) {
        throw std::runtime_error("baseline file is a '" + j.at("family").get<std::string>() +
                                 "', expected '" + family + "'");
    }
    if (j.at("schema_hash").get<std::string>() != expect_hash) {
        throw ConfigError("schema hash mismatch: model '" + family +
                          "' was trained under a different encoding than this dataset");
    }
    return j.at("document");
}

}  // namespace

std::filesystem::path PipelinePaths::funnel_json(const std::filesystem::path& labeled) const {
    fs::path p = labeled;
    p.replace_filename(labeled.stem().string() + "_funnel.json");
    return p;
}

void write_manifest(const ExperimentConfig& cfg, const std::string& command,
                    const std::vector<std::filesystem::path>& artifacts) {
    PipelinePaths paths{cfg.output_dir};
    json j;
    j["format_version"] = 1;
    j["tool_version"] = std::string(kToolVersion);
    j["command"] = command;
    j["timestamp"] = utc_now();
    j["config"] = config_snapshot(cfg);
    json files = json::array();
    for (const auto& path : artifacts) {
        json f;
        fs::path rel = fs::relative(path, cfg.output_dir);
        f["path"] = rel.string();
        f["fnv1a64"] = file_hash(path);
        files.push_back(std::move(f));
    }
    j["artifacts"] = std::move(files);
    save_text_file(paths.manifest_json(), j.dump(2) + "\n");
}

fs::path run_synth(const ExperimentConfig& cfg, std::optional<fs::path> out) {
    if (!cfg.generator) {
        throw ConfigError("synth: config has no [generator] section (generator spec required)");
    }
    if (cfg.generator->size == 0) throw ConfigError("empty cohort requested");
    PipelinePaths paths{cfg.output_dir};
    fs::path target = out.value_or(paths.cohort_csv());
    std::vector<RawPatientRecord> records;
    try {
        records = synthesize_cohort(*cfg.generator, derive_seed(cfg.seed, kSynthTag));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("synth: ") + e.what());
    }
    write_cohort_csv(target, records, cfg.schema());
    HFSTRAT_INFO("synth: wrote %zu records to %s", records.size(), target.string().c_str());
    write_manifest(cfg, "synth", {target});
    return target;
}

PreprocessResult run_preprocess(const ExperimentConfig& cfg, std::optional<fs::path> in,
                                std::optional<fs::path> out) {
    PipelinePaths paths{cfg.output_dir};
    fs::path source = in.value_or(paths.cohort_csv());
    fs::path target = out.value_or(paths.labeled_csv());

    LoadReport report;
    std::vector<RawPatientRecord> records = load_cohort(source, cfg.schema(), &report);
    for (const auto& err : report.row_errors) {
        HFSTRAT_WARN("%s line %zu: %s", source.string().c_str(), err.line, err.message.c_str());
    }
    LabeledCohort cohort = preprocess(records, cfg.schema(), cfg.preprocess);
    write_labeled_csv(target, cohort);

    json funnel;
    json steps = json::array();
    for (const auto& step : cohort.funnel) {
        steps.push_back({{"step_name", step.name}, {"records_remaining", step.records_remaining}});
    }
    funnel["steps"] = std::move(steps);
    fs::path funnel_path = paths.funnel_json(target);
    save_text_file(funnel_path, funnel.dump(2) + "\n");

    HFSTRAT_INFO("preprocess: %zu records survive the funnel", cohort.size());
    write_manifest(cfg, "preprocess", {target, funnel_path});
    return {std::move(cohort), target, funnel_path};
}

TrainResult run_train(const ExperimentConfig& cfg, std::optional<fs::path> in) {
    PipelinePaths paths{cfg.output_dir};
    fs::path source = in.value_or(paths.labeled_csv());

    LabeledCohort cohort = load_labeled_cohort(source, cfg.schema());
    DesignMatrix dm = encode(cohort);

    TrainResult result;
    result.split = stratified_split(dm.y, cfg.test_fraction, derive_seed(cfg.seed, kSplitTag));
    Matrix x_train = dm.x.select_rows(result.split.train);
    std::vector<int> y_train = select(dm.y, result.split.train);
    DesignMatrix dm_train{x_train, y_train, dm.layout};

    HFSTRAT_INFO("train: %zu train / %zu test rows", result.split.train.size(),
                 result.split.test.size());
    result.stacking = train_stacking(dm_train, cfg.stacking);

    HFSTRAT_INFO("train: grid-searching decision-tree baseline (%zu candidates)",
                 cfg.tree_grid.candidate_count());
    result.tree_grid = grid_search(tree_trainer(), cfg.tree_grid, x_train, y_train,
                                   cfg.stacking.k, derive_seed(cfg.seed, kTreeGridTag));
    HFSTRAT_INFO("train: grid-searching SVC baseline (%zu candidates)",
                 cfg.svc_grid.candidate_count());
    result.svc_grid = grid_search(svc_trainer(), cfg.svc_grid, x_train, y_train, cfg.stacking.k,
                                  derive_seed(cfg.seed, kSvcGridTag));

    json split;
    split["format_version"] = 1;
    split["seed"] = cfg.seed;
    split["test_fraction"] = cfg.test_fraction;
    split["train"] = result.split.train;
    split["test"] = result.split.test;
    save_text_file(paths.split_json(), split.dump(2) + "\n");

    result.ensemble_path = paths.ensemble_json();
    save_text_file(result.ensemble_path, ensemble_to_json(result.stacking.ensemble));

    const std::string schema_hash = dm.layout.schema_hash();
    const auto* tree_model = dynamic_cast<const DecisionTreeModel*>(result.tree_grid.model.get());
    const auto* svc_model = dynamic_cast<const SvcModel*>(result.svc_grid.model.get());
    save_text_file(paths.tree_json(),
                   baseline_to_json("decision_tree", schema_hash, result.tree_grid.winner(),
                                    model_to_json(*tree_model)));
    save_text_file(paths.svc_json(), baseline_to_json("svc", schema_hash,
                                                      result.svc_grid.winner(),
                                                      model_to_json(*svc_model)));

    save_text_file(paths.grid_json("clinical"),
                   grid_result_json(result.stacking.clinical_grid, "clinical_logistic"));
    save_text_file(paths.grid_json("echo"),
                   grid_result_json(result.stacking.echo_grid, "echo_logistic"));
    save_text_file(paths.grid_json("forest"),
                   grid_result_json(result.stacking.forest_grid, "full_forest"));
    save_text_file(paths.grid_json("meta"),
                   grid_result_json(result.stacking.meta_grid, "meta_logistic"));
    save_text_file(paths.grid_json("tree"), grid_result_json(result.tree_grid, "decision_tree"));
    save_text_file(paths.grid_json("svc"), grid_result_json(result.svc_grid, "svc"));

    write_manifest(cfg, "train",
                   {paths.split_json(), result.ensemble_path, paths.tree_json(), paths.svc_json(),
                    paths.grid_json("clinical"), paths.grid_json("echo"), paths.grid_json("forest"),
                    paths.grid_json("meta"), paths.grid_json("tree"), paths.grid_json("svc")});
    return result;
}

CompareResult run_compare(const ExperimentConfig& cfg, std::optional<fs::path> in,
                          std::vector<std::string> models) {
    PipelinePaths paths{cfg.output_dir};
    fs::path source = in.value_or(paths.labeled_csv());

    LabeledCohort cohort = load_labeled_cohort(source, cfg.schema());
    DesignMatrix dm = encode(cohort);
    const std::string schema_hash = dm.layout.schema_hash();

    json split = json::parse(load_text_file(paths.split_json()));
    std::vector<std::size_t> train_idx = split.at("train").get<std::vector<std::size_t>>();
    std::vector<std::size_t> test_idx = split.at("test").get<std::vector<std::size_t>>();
    std::sort(train_idx.begin(), train_idx.end());
    // The split file is the leakage guard: evaluation may only ever touch
    // test indices, and they must be disjoint from training ones.
    for (std::size_t i : test_idx) {
        if (i >= dm.rows()) {
            throw std::runtime_error("split file references row " + std::to_string(i) +
                                     " beyond the dataset");
        }
        if (std::binary_search(train_idx.begin(), train_idx.end(), i)) {
            throw std::runtime_error("split file is corrupt: index " + std::to_string(i) +
                                     " is in both train and test");
        }
    }
    if (train_idx.size() + test_idx.size() != dm.rows()) {
        throw std::runtime_error("split file does not cover the dataset");
    }

    StackingEnsemble ensemble = ensemble_from_json(load_text_file(paths.ensemble_json()));
    if (ensemble.schema_hash != schema_hash) {
        throw ConfigError(
            "schema hash mismatch: the ensemble was trained under a different encoding than "
            "this dataset");
    }

    Matrix x_test = dm.x.select_rows(test_idx);
    std::vector<int> y_test = select(dm.y, test_idx);
    Matrix x_test_clin = x_test.select_cols(ensemble.clinical_columns);
    Matrix x_test_echo = x_test.select_cols(ensemble.echo_columns);

    CompareResult result;
    for (const std::string& name : models) {
        std::vector<int> predicted;
        if (name == "meta") {
            predicted.reserve(x_test.rows());
            for (std::size_t i = 0; i < x_test.rows(); ++i) {
                predicted.push_back(predict_stacking(ensemble, x_test.row(i)).label);
            }
        } else if (name == "clinical") {
            predicted = ensemble.clinical_model.predict_labels(x_test_clin);
        } else if (name == "echo") {
            predicted = ensemble.echo_model.predict_labels(x_test_echo);
        } else if (name == "forest") {
            predicted = ensemble.full_model.predict_labels(x_test);
        } else if (name == "tree") {
            DecisionTreeModel tree = tree_from_json(
                parse_baseline(load_text_file(paths.tree_json()), "decision_tree", schema_hash)
                    .dump());
            predicted = tree.predict_labels(x_test);
        } else if (name == "svc") {
            SvcModel svc = svc_from_json(
                parse_baseline(load_text_file(paths.svc_json()), "svc", schema_hash).dump());
            predicted = svc.predict_labels(x_test);
        } else {
            throw ConfigError("unknown model '" + name + "' (expected meta, clinical, echo, "
                              "forest, tree, or svc)");
        }
        result.scores.push_back({name, evaluate(y_test, predicted)});
    }

    result.json = comparison_json(result.scores);
    result.text = comparison_text(result.scores);
    save_text_file(paths.comparison_json(), result.json);
    save_text_file(paths.comparison_txt(), result.text);
    write_manifest(cfg, "compare", {paths.comparison_json(), paths.comparison_txt()});
    return result;
}

std::string run_predict(const fs::path& model_path, const fs::path& record_path,
                        const CohortSchema& schema) {
    StackingEnsemble ensemble = ensemble_from_json(load_text_file(model_path));
    EncodingLayout layout = EncodingLayout::from_schema(schema);
    if (layout.schema_hash() != ensemble.schema_hash) {
        throw ConfigError("schema hash mismatch: the model was trained under a different schema");
    }

    json doc = json::parse(load_text_file(record_path));
    if (!doc.is_object()) throw ConfigError("record file must hold a JSON object");
    std::map<std::string, FeatureValue> values;
    for (const auto& [key, value] : doc.items()) {
        const FeatureSpec* spec = schema.find(key);
        if (spec == nullptr) throw ConfigError("record field '" + key + "' is not in the schema");
        if (value.is_number()) {
            values[key] = value.get<double>();
        } else if (value.is_string()) {
            values[key] = value.get<std::string>();
        } else {
            throw ConfigError("record field '" + key + "' must be a number or string");
        }
    }

    // Group presence decides the path: complete record, or one whole group
    // absent (degraded), or an error naming what is missing.
    std::size_t clin_present = 0, clin_total = 0, echo_present = 0, echo_total = 0;
    for (const auto& f : schema.features) {
        bool present = values.count(f.name) > 0;
        if (f.group == FeatureGroup::Clinical) {
            ++clin_total;
            clin_present += present;
        } else {
            ++echo_total;
            echo_present += present;
        }
    }
    if (clin_present == 0 && echo_present == 0) {
        throw ConfigError("record has no feature values: both groups missing");
    }

    auto validate_group = [&](FeatureGroup g) {
        for (const auto& f : schema.features) {
            if (f.group != g) continue;
            auto it = values.find(f.name);
            if (it == values.end()) {
                throw ConfigError("record field '" + f.name + "' is missing");
            }
            if (!f.in_domain(it->second)) {
                throw ConfigError("record field '" + f.name + "' is out of domain");
            }
        }
    };

    StackingPrediction pred;
    if (clin_present == clin_total && echo_present == echo_total) {
        validate_group(FeatureGroup::Clinical);
        validate_group(FeatureGroup::Echocardiographic);
        pred = predict_stacking(ensemble, layout.encode_record(values));
    } else if (echo_present == 0) {
        validate_group(FeatureGroup::Clinical);
        pred = predict_with_missing_group(
            ensemble, layout.encode_record_group(values, FeatureGroup::Clinical),
            FeatureGroup::Echocardiographic);
    } else if (clin_present == 0) {
        validate_group(FeatureGroup::Echocardiographic);
        pred = predict_with_missing_group(
            ensemble, layout.encode_record_group(values, FeatureGroup::Echocardiographic),
            FeatureGroup::Clinical);
    } else {
        // partially present group: name a concrete missing field
        const FeatureGroup incomplete = clin_present < clin_total
                                            ? FeatureGroup::Clinical
                                            : FeatureGroup::Echocardiographic;
        for (const auto& f : schema.features) {
            if (f.group == incomplete && values.count(f.name) == 0) {
                throw ConfigError("record field '" + f.name +
                                  "' is missing (groups must be complete or wholly absent)");
            }
        }
        throw ConfigError("record is incomplete");
    }

    json out;
    out["label"] = pred.label;
    out["confidence"] = pred.confidence;
    out["degraded"] = pred.degraded;
    json expl = json::array();
    for (const auto& base : pred.explanation) {
        expl.push_back({{"model", base.model},
                        {"label", base.label},
                        {"confidence", base.confidence}});
    }
    out["explanation"] = std::move(expl);
    return out.dump(2) + "\n";
}

}  // namespace hfstrat
