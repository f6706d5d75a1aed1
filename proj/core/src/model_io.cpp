#include "hfstrat/model_io.hpp"

#include <fstream>
#include <stdexcept>

#include "nlohmann/json.hpp"

namespace hfstrat {

using json = nlohmann::ordered_json;

namespace {

json header(const char* model) {
    json j;
    j["format_version"] = kModelFormatVersion;
    j["model"] = model;
    return j;
}

json parse_checked(const std::string& text, const char* expected_model) {
    json j = json::parse(text);
    int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
        throw std::runtime_error("unsupported model format version " + std::to_string(version));
    }
    std::string model = j.at("model").get<std::string>();
    if (model != expected_model) {
        throw std::runtime_error("expected a '" + std::string(expected_model) +
                                 "' document, found '" + model + "'");
    }
    return j;
}

json standardization_to_json(const StandardizationParams& p) {
    json j;
    j["means"] = p.means;
    j["scales"] = p.scales;
    return j;
}

StandardizationParams standardization_from_json(const json& j) {
    StandardizationParams p;
    p.means = j.at("means").get<std::vector<double>>();
    p.scales = j.at("scales").get<std::vector<double>>();
    return p;
}

json params_to_json(const ParamSet& params) {
    json j = json::object();
    for (const auto& [key, value] : params) {
        if (const auto* i = std::get_if<std::int64_t>(&value)) {
            j[key] = *i;
        } else if (const auto* d = std::get_if<double>(&value)) {
            j[key] = *d;
        } else {
            j[key] = std::get<std::string>(value);
        }
    }
    return j;
}

ParamSet params_from_json(const json& j) {
    ParamSet params;
    for (const auto& [key, value] : j.items()) {
        if (value.is_number_integer()) {
            params[key] = value.get<std::int64_t>();
        } else if (value.is_number_float()) {
            params[key] = value.get<double>();
        } else {
            params[key] = value.get<std::string>();
        }
    }
    return params;
}

json logistic_body(const LogisticModel& m) {
    json j = header("logistic");
    j["weights"] = m.weights();
    j["bias"] = m.bias();
    j["C"] = m.reg_strength();
    j["standardization"] = standardization_to_json(m.standardization());
    return j;
}

LogisticModel logistic_from_body(const json& j) {
    return LogisticModel(j.at("weights").get<std::vector<double>>(), j.at("bias").get<double>(),
                         j.at("C").get<double>(),
                         standardization_from_json(j.at("standardization")));
}

json tree_body(const DecisionTreeModel& m) {
    json j = header("decision_tree");
    json nodes = json::array();
    for (const TreeNode& n : m.nodes()) {
        json node;
        node["column"] = n.column;
        node["threshold"] = n.threshold;
        node["left"] = n.left;
        node["right"] = n.right;
        node["p1"] = n.p1;
        node["count"] = n.count;
        nodes.push_back(std::move(node));
    }
    j["nodes"] = std::move(nodes);
    json params;
    if (m.params().max_depth) {
        params["max_depth"] = *m.params().max_depth;
    } else {
        params["max_depth"] = nullptr;
    }
    params["min_samples_split"] = m.params().min_samples_split;
    params["min_samples_leaf"] = m.params().min_samples_leaf;
    j["params"] = std::move(params);
    return j;
}

DecisionTreeModel tree_from_body(const json& j) {
    std::vector<TreeNode> nodes;
    for (const json& node : j.at("nodes")) {
        TreeNode n;
        n.column = node.at("column").get<int>();
        n.threshold = node.at("threshold").get<double>();
        n.left = node.at("left").get<int>();
        n.right = node.at("right").get<int>();
        n.p1 = node.at("p1").get<double>();
        n.count = node.at("count").get<int>();
        nodes.push_back(n);
    }
    TreeParams params;
    const json& p = j.at("params");
    if (!p.at("max_depth").is_null()) params.max_depth = p.at("max_depth").get<int>();
    params.min_samples_split = p.at("min_samples_split").get<int>();
    params.min_samples_leaf = p.at("min_samples_leaf").get<int>();
    return DecisionTreeModel(std::move(nodes), params);
}

json forest_body(const RandomForestModel& m) {
    json j = header("random_forest");
    json params;
    params["n_trees"] = m.params().n_trees;
    if (m.params().max_depth) {
        params["max_depth"] = *m.params().max_depth;
    } else {
        params["max_depth"] = nullptr;
    }
    params["min_samples_leaf"] = m.params().min_samples_leaf;
    if (m.params().features_per_split) {
        params["features_per_split"] = *m.params().features_per_split;
    } else {
        params["features_per_split"] = nullptr;
    }
    params["bootstrap"] = m.params().bootstrap;
    j["params"] = std::move(params);
    j["seed"] = m.seed();
    json trees = json::array();
    for (const DecisionTreeModel& t : m.trees()) trees.push_back(tree_body(t));
    j["trees"] = std::move(trees);
    return j;
}

RandomForestModel forest_from_body(const json& j) {
    ForestParams params;
    const json& p = j.at("params");
    params.n_trees = p.at("n_trees").get<int>();
    if (!p.at("max_depth").is_null()) params.max_depth = p.at("max_depth").get<int>();
    params.min_samples_leaf = p.at("min_samples_leaf").get<int>();
    if (!p.at("features_per_split").is_null()) {
        params.features_per_split = p.at("features_per_split").get<std::size_t>();
    }
    params.bootstrap = p.at("bootstrap").get<bool>();
    std::vector<DecisionTreeModel> trees;
    for (const json& t : j.at("trees")) trees.push_back(tree_from_body(t));
    return RandomForestModel(std::move(trees), params, j.at("seed").get<std::uint64_t>());
}

json svc_body(const SvcModel& m) {
    json j = header("svc");
    j["kernel"] = m.kernel() == SvcKernel::Linear ? "linear" : "rbf";
    j["gamma"] = m.gamma();
    j["C"] = m.c();
    j["bias"] = m.bias();
    j["alpha"] = m.alpha();
    j["signed_labels"] = m.signed_labels();
    json sv;
    sv["rows"] = m.support_vectors().rows();
    sv["cols"] = m.support_vectors().cols();
    sv["data"] = m.support_vectors().data();
    j["support_vectors"] = std::move(sv);
    j["standardization"] = standardization_to_json(m.standardization());
    return j;
}

SvcModel svc_from_body(const json& j) {
    std::string kernel_name = j.at("kernel").get<std::string>();
    SvcKernel kernel = kernel_name == "linear" ? SvcKernel::Linear : SvcKernel::Rbf;
    const json& sv = j.at("support_vectors");
    Matrix support(sv.at("rows").get<std::size_t>(), sv.at("cols").get<std::size_t>(),
                   sv.at("data").get<std::vector<double>>());
    return SvcModel(kernel, j.at("gamma").get<double>(), j.at("alpha").get<std::vector<double>>(),
                    j.at("signed_labels").get<std::vector<int>>(), std::move(support),
                    j.at("bias").get<double>(), j.at("C").get<double>(),
                    standardization_from_json(j.at("standardization")));
}

}  // namespace

std::string model_to_json(const LogisticModel& m) { return logistic_body(m).dump(2) + "\n"; }
std::string model_to_json(const DecisionTreeModel& m) { return tree_body(m).dump(2) + "\n"; }
std::string model_to_json(const RandomForestModel& m) { return forest_body(m).dump(2) + "\n"; }
std::string model_to_json(const SvcModel& m) { return svc_body(m).dump(2) + "\n"; }

LogisticModel logistic_from_json(const std::string& text) {
    return logistic_from_body(parse_checked(text, "logistic"));
}

DecisionTreeModel tree_from_json(const std::string& text) {
    return tree_from_body(parse_checked(text, "decision_tree"));
}

RandomForestModel forest_from_json(const std::string& text) {
    return forest_from_body(parse_checked(text, "random_forest"));
}

SvcModel svc_from_json(const std::string& text) {
    return svc_from_body(parse_checked(text, "svc"));
}

std::string ensemble_to_json(const StackingEnsemble& e) {
    json j = header("stacking_ensemble");
    j["schema_hash"] = e.schema_hash;
    j["clinical_columns"] = e.clinical_columns;
    j["echo_columns"] = e.echo_columns;
    j["majority_label"] = e.majority_label;
    json prov;
    prov["seed"] = e.provenance.seed;
    prov["k"] = e.provenance.k;
    prov["protocol"] = to_string(e.provenance.protocol);
    prov["meta_features"] = to_string(e.provenance.features);
    prov["clinical_params"] = params_to_json(e.provenance.clinical_params);
    prov["echo_params"] = params_to_json(e.provenance.echo_params);
    prov["forest_params"] = params_to_json(e.provenance.forest_params);
    prov["meta_params"] = params_to_json(e.provenance.meta_params);
    prov["clinical_cv_accuracy"] = e.provenance.clinical_cv;
    prov["echo_cv_accuracy"] = e.provenance.echo_cv;
    prov["forest_cv_accuracy"] = e.provenance.forest_cv;
    prov["meta_cv_accuracy"] = e.provenance.meta_cv;
    j["provenance"] = std::move(prov);
    j["clinical_model"] = logistic_body(e.clinical_model);
    j["echo_model"] = logistic_body(e.echo_model);
    j["full_model"] = forest_body(e.full_model);
    j["meta_model"] = logistic_body(e.meta_model);
    return j.dump(2) + "\n";
}

StackingEnsemble ensemble_from_json(const std::string& text) {
    json j = parse_checked(text, "stacking_ensemble");
    StackingEnsemble e;
    e.schema_hash = j.at("schema_hash").get<std::string>();
    e.clinical_columns = j.at("clinical_columns").get<std::vector<std::size_t>>();
    e.echo_columns = j.at("echo_columns").get<std::vector<std::size_t>>();
    e.majority_label = j.at("majority_label").get<int>();
    const json& prov = j.at("provenance");
    e.provenance.seed = prov.at("seed").get<std::uint64_t>();
    e.provenance.k = prov.at("k").get<std::size_t>();
    e.provenance.protocol = meta_protocol_from_string(prov.at("protocol").get<std::string>());
    e.provenance.features =
        meta_feature_set_from_string(prov.at("meta_features").get<std::string>());
    e.provenance.clinical_params = params_from_json(prov.at("clinical_params"));
    e.provenance.echo_params = params_from_json(prov.at("echo_params"));
    e.provenance.forest_params = params_from_json(prov.at("forest_params"));
    e.provenance.meta_params = params_from_json(prov.at("meta_params"));
    e.provenance.clinical_cv = prov.at("clinical_cv_accuracy").get<double>();
    e.provenance.echo_cv = prov.at("echo_cv_accuracy").get<double>();
    e.provenance.forest_cv = prov.at("forest_cv_accuracy").get<double>();
    e.provenance.meta_cv = prov.at("meta_cv_accuracy").get<double>();
    e.clinical_model = logistic_from_body(j.at("clinical_model"));
    e.echo_model = logistic_from_body(j.at("echo_model"));
    e.full_model = forest_from_body(j.at("full_model"));
    e.meta_model = logistic_from_body(j.at("meta_model"));
    return e;
}

void save_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::string load_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return content;
}

}  // namespace hfstrat
