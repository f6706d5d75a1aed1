#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "hfstrat/cohort_csv.hpp"
#include "hfstrat/hash.hpp"
#include "hfstrat/model_io.hpp"
#include "hfstrat/pipeline.hpp"
#include "nlohmann/json.hpp"
#include "test_support.hpp"

using namespace hfstrat;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string config_text(const fs::path& out_dir) {
    return "[experiment]\n"
           "seed = 2718\n"
           "output_dir = " + out_dir.string() + "\n"
           "test_fraction = 0.25\n"
           "[generator]\n"
           "size = 120\n"
           "outcome_failures = 20\n"
           "[stacking]\n"
           "k = 3\n"
           "[grid.clinical]\nC = 0.1, 10\n"
           "[grid.echo]\nC = 0.1, 10\n"
           "[grid.meta]\nC = 1.0\n"
           "[grid.forest]\nn_trees = 10\nmax_depth = 3\nmin_samples_leaf = 1\n"
           "[grid.tree]\nmax_depth = 2, 3\nmin_samples_split = 2\n"
           "[grid.svc]\nC = 1.0\nkernel = linear\n";
}

ExperimentConfig config_for(const fs::path& out_dir) {
    return ExperimentConfig::from_config(ConfigFile::parse(config_text(out_dir)));
}

// One synth -> preprocess -> train chain shared by the read-only tests.
struct Chain {
    fs::path dir;
    ExperimentConfig cfg;
    TrainResult train;

    Chain() : dir(testsupport::make_temp_dir("pipeline")), cfg(config_for(dir)) {
        run_synth(cfg);
        run_preprocess(cfg);
        train = run_train(cfg);
    }
    ~Chain() { fs::remove_all(dir); }
};

Chain& chain() {
    static Chain c;
    return c;
}

// Copies the shared run into a fresh directory so a test can tamper freely.
struct TamperedRun {
    fs::path dir;
    ExperimentConfig cfg;

    TamperedRun() : dir(testsupport::make_temp_dir("tamper")), cfg(config_for(dir)) {
        fs::copy(chain().dir, dir, fs::copy_options::recursive | fs::copy_options::overwrite_existing);
    }
    ~TamperedRun() { fs::remove_all(dir); }
};

void rewrite_json(const fs::path& path, const std::function<void(json&)>& mutate) {
    json doc = json::parse(load_text_file(path));
    mutate(doc);
    save_text_file(path, doc.dump(2) + "\n");
}

void write_record_json(const fs::path& path, const std::map<std::string, FeatureValue>& values,
                       const std::vector<std::string>& drop = {}) {
    json doc = json::object();
    for (const auto& [name, value] : values) {
        if (std::find(drop.begin(), drop.end(), name) != drop.end()) continue;
        if (const auto* d = std::get_if<double>(&value)) {
            doc[name] = *d;
        } else {
            doc[name] = std::get<std::string>(value);
        }
    }
    save_text_file(path, doc.dump(2) + "\n");
}

std::vector<std::string> echo_feature_names() {
    std::vector<std::string> names;
    for (const auto& f : default_schema().features) {
        if (f.group == FeatureGroup::Echocardiographic) names.push_back(f.name);
    }
    return names;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("synth writes the cohort and its manifest") {
    const fs::path cohort = chain().dir / "cohort.csv";
    REQUIRE(fs::exists(cohort));
    LoadReport report;
    const auto records = load_cohort(cohort, default_schema(), &report);
    CHECK(records.size() == 120);
    CHECK(report.row_errors.empty());

    const json manifest = json::parse(load_text_file(chain().dir / "manifest.json"));
    CHECK(manifest.at("format_version") == 1);
    CHECK(manifest.at("config").at("seed") == 2718);

    ExperimentConfig no_gen = chain().cfg;
    no_gen.generator.reset();
    CHECK_THROWS_AS(run_synth(no_gen), ConfigError);
}

TEST_CASE("synth honors an explicit output path") {
    const fs::path alt = chain().dir / "alt" / "raw.csv";
    const fs::path written = run_synth(chain().cfg, alt);
    CHECK(written == alt);
    CHECK(load_text_file(alt) == load_text_file(chain().dir / "cohort.csv"));
    // restore the manifest for later artifact checks
    run_preprocess(chain().cfg);
}

TEST_CASE("preprocess writes the labeled cohort and funnel report") {
    REQUIRE(fs::exists(chain().dir / "labeled.csv"));
    const fs::path funnel_path = chain().dir / "labeled_funnel.json";
    REQUIRE(fs::exists(funnel_path));
    CHECK(PipelinePaths{chain().dir}.funnel_json(chain().dir / "labeled.csv") == funnel_path);

    const json funnel = json::parse(load_text_file(funnel_path));
    const auto& steps = funnel.at("steps");
    REQUIRE(steps.size() == 4);
    CHECK(steps[0].at("records_remaining") == 120);
    CHECK(steps[1].at("records_remaining") == 100);
    CHECK(steps[3].at("records_remaining") == 100);
    for (const auto& step : steps) CHECK(step.contains("step_name"));

    const auto cohort = load_labeled_cohort(chain().dir / "labeled.csv", default_schema());
    CHECK(cohort.size() == 100);
}

TEST_CASE("train persists the split, the models, and every grid report") {
    const auto& t = chain().train;
    CHECK(t.split.train.size() == 75);
    CHECK(t.split.test.size() == 25);

    const json split = json::parse(load_text_file(chain().dir / "split.json"));
    CHECK(split.at("format_version") == 1);
    CHECK(split.at("seed") == 2718);
    CHECK(split.at("test_fraction") == 0.25);
    CHECK(split.at("train").get<std::vector<std::size_t>>() == t.split.train);
    CHECK(split.at("test").get<std::vector<std::size_t>>() == t.split.test);

    for (const char* name : {"ensemble.json", "tree.json", "svc.json", "grid_clinical.json",
                             "grid_echo.json", "grid_forest.json", "grid_meta.json",
                             "grid_tree.json", "grid_svc.json"}) {
        CHECK(fs::exists(chain().dir / "models" / name));
    }

    const json tree_doc = json::parse(load_text_file(chain().dir / "models" / "tree.json"));
    CHECK(tree_doc.at("model") == "baseline");
    CHECK(tree_doc.at("family") == "decision_tree");
    CHECK(tree_doc.at("schema_hash") == t.stacking.ensemble.schema_hash);
    CHECK(tree_doc.at("document").at("model") == "decision_tree");

    const json grid_doc = json::parse(load_text_file(chain().dir / "models" / "grid_forest.json"));
    CHECK(grid_doc.at("model") == "full_forest");
    CHECK(grid_doc.at("candidates").size() == 1);
}

TEST_CASE("compare scores the six models on the held-out split only") {
    const CompareResult result = run_compare(chain().cfg);
    REQUIRE(result.scores.size() == 6);
    for (std::size_t i = 0; i < kCompareModels.size(); ++i) {
        CHECK(result.scores[i].name == kCompareModels[i]);
        const ConfusionMatrix& cm = result.scores[i].report.cm;
        CHECK(cm.tp + cm.tn + cm.fp + cm.fn == 25);
    }
    CHECK(load_text_file(chain().dir / "comparison.json") == result.json);
    CHECK(load_text_file(chain().dir / "comparison.txt") == result.text);

    const CompareResult tree_only = run_compare(chain().cfg, {}, {"tree"});
    REQUIRE(tree_only.scores.size() == 1);
    CHECK(tree_only.scores[0].name == "tree");

    CHECK_THROWS_AS(run_compare(chain().cfg, {}, {"zebra"}), ConfigError);
}

TEST_CASE("compare refuses a split with train/test overlap") {
    TamperedRun run;
    rewrite_json(run.dir / "split.json", [](json& doc) {
        doc["test"].push_back(doc.at("train")[0].get<std::size_t>());
    });
    CHECK_THROWS_WITH_AS(run_compare(run.cfg), doctest::Contains("both train and test"),
                         std::runtime_error);
}

TEST_CASE("compare refuses a split that does not cover the dataset") {
    TamperedRun run;
    rewrite_json(run.dir / "split.json", [](json& doc) {
        auto test = doc.at("test").get<std::vector<std::size_t>>();
        test.pop_back();
        doc["test"] = test;
    });
    CHECK_THROWS_WITH_AS(run_compare(run.cfg), doctest::Contains("does not cover"),
                         std::runtime_error);
}

TEST_CASE("compare refuses out-of-range test indices") {
    TamperedRun run;
    rewrite_json(run.dir / "split.json", [](json& doc) { doc["test"][0] = 100000; });
    CHECK_THROWS_WITH_AS(run_compare(run.cfg), doctest::Contains("beyond the dataset"),
                         std::runtime_error);
}

TEST_CASE("compare refuses an ensemble trained under another encoding") {
    TamperedRun run;
    rewrite_json(run.dir / "models" / "ensemble.json",
                 [](json& doc) { doc["schema_hash"] = "deadbeefdeadbeef"; });
    CHECK_THROWS_WITH_AS(run_compare(run.cfg), doctest::Contains("schema hash mismatch"),
                         ConfigError);
}

TEST_CASE("manifests list every artifact with its content hash") {
    run_compare(chain().cfg);
    const json manifest = json::parse(load_text_file(chain().dir / "manifest.json"));
    CHECK(manifest.at("command") == "compare");
    CHECK(manifest.at("tool_version").is_string());
    CHECK(manifest.at("timestamp").is_string());
    const auto& artifacts = manifest.at("artifacts");
    REQUIRE(artifacts.size() == 2);
    for (const auto& entry : artifacts) {
        const fs::path path = chain().dir / entry.at("path").get<std::string>();
        REQUIRE(fs::exists(path));
        CHECK(entry.at("fnv1a64").get<std::string>() == to_hex(fnv1a64(load_text_file(path))));
    }
}

TEST_CASE("predict answers full, degraded, and malformed records") {
    const fs::path dir = testsupport::make_temp_dir("predict");
    const fs::path model = chain().dir / "models" / "ensemble.json";
    const auto record = testsupport::make_record("P0400");

    write_record_json(dir / "full.json", record.values);
    const json full = json::parse(run_predict(model, dir / "full.json", default_schema()));
    CHECK((full.at("label") == 0 || full.at("label") == 1));
    CHECK_FALSE(full.at("degraded").get<bool>());
    REQUIRE(full.at("explanation").size() == 3);
    CHECK(full.at("explanation")[0].at("model") == "clinical");
    CHECK(full.at("explanation")[1].at("model") == "echocardiographic");
    CHECK(full.at("explanation")[2].at("model") == "full");

    write_record_json(dir / "clin.json", record.values, echo_feature_names());
    const json degraded = json::parse(run_predict(model, dir / "clin.json", default_schema()));
    CHECK(degraded.at("degraded").get<bool>());
    CHECK(degraded.at("explanation")[1].at("confidence") == 0.5);

    // one echo feature missing: the group is partial, not absent
    write_record_json(dir / "partial.json", record.values, {"TAPSE"});
    CHECK_THROWS_WITH_AS(run_predict(model, dir / "partial.json", default_schema()),
                         doctest::Contains("TAPSE"), ConfigError);

    auto bad = record.values;
    bad["EF"] = 400.0;
    write_record_json(dir / "bad.json", bad);
    CHECK_THROWS_WITH_AS(run_predict(model, dir / "bad.json", default_schema()),
                         doctest::Contains("out of domain"), ConfigError);

    auto unknown = record.values;
    unknown["Favorite Color"] = std::string("green");
    write_record_json(dir / "unknown.json", unknown);
    CHECK_THROWS_WITH_AS(run_predict(model, dir / "unknown.json", default_schema()),
                         doctest::Contains("not in the schema"), ConfigError);

    save_text_file(dir / "array.json", "[1, 2, 3]\n");
    CHECK_THROWS_AS(run_predict(model, dir / "array.json", default_schema()), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("two identical runs produce byte-identical artifacts") {
    std::vector<std::string> artifact_names = {
        "cohort.csv",           "labeled.csv",          "labeled_funnel.json",
        "split.json",           "comparison.json",      "comparison.txt",
        "models/ensemble.json", "models/tree.json",     "models/svc.json",
        "models/grid_clinical.json", "models/grid_forest.json"};

    const fs::path a = testsupport::make_temp_dir("repro_a");
    const fs::path b = testsupport::make_temp_dir("repro_b");
    for (const fs::path& dir : {a, b}) {
        const ExperimentConfig cfg = config_for(dir);
        run_synth(cfg);
        run_preprocess(cfg);
        run_train(cfg);
        run_compare(cfg);
    }
    for (const auto& name : artifact_names) {
        CAPTURE(name);
        CHECK(load_text_file(a / name) == load_text_file(b / name));
    }
    // A different seed changes the cohort, hence everything downstream.
    const fs::path c = testsupport::make_temp_dir("repro_c");
    auto other = ConfigFile::parse(config_text(c));
    ExperimentConfig cfg_c = ExperimentConfig::from_config(other, std::uint64_t{99});
    run_synth(cfg_c);
    CHECK(load_text_file(a / "cohort.csv") != load_text_file(c / "cohort.csv"));
    fs::remove_all(a);
    fs::remove_all(b);
    fs::remove_all(c);
}

TEST_CASE("the checked-in funnel fixture regenerates from its recipe") {
    const fs::path dir = testsupport::make_temp_dir("fixture");
    const ExperimentConfig cfg = ExperimentConfig::from_config(ConfigFile::parse(
        "[experiment]\n"
        "seed = 1337\n"
        "output_dir = " + dir.string() + "\n"
        "[generator]\n"
        "size = 1040\n"
        "at_risk_fraction = 0.45\n"
        "outcome_failures = 576\n"
        "missing_failures = 99\n"
        "domain_failures = 8\n"));
    REQUIRE(cfg.generator.has_value());
    CHECK(cfg.generator->size == funnel_fixture_spec().size);

    run_synth(cfg);
    const std::string generated = load_text_file(dir / "cohort.csv");
    const std::string committed =
        load_text_file(fs::path(HFSTRAT_TEST_DATA_DIR) / "funnel_cohort_1040.csv");
    CHECK(generated == committed);

    const auto pre = run_preprocess(cfg);
    REQUIRE(pre.cohort.funnel.size() == 4);
    CHECK(pre.cohort.funnel[0].records_remaining == 1040);
    CHECK(pre.cohort.funnel[1].records_remaining == 464);
    CHECK(pre.cohort.funnel[2].records_remaining == 365);
    CHECK(pre.cohort.funnel[3].records_remaining == 357);
    std::size_t at_risk = 0;
    for (int label : pre.cohort.labels) at_risk += static_cast<std::size_t>(label);
    CHECK(at_risk == 161);
    fs::remove_all(dir);
}

}  // TEST_SUITE
