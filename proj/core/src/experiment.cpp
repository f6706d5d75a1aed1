#include "hfstrat/experiment.hpp"

#include <charconv>

#include "hfstrat/trainers.hpp"

namespace hfstrat {
namespace {

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError("config: " + what + " must be a non-negative integer, found '" + text +
                          "'");
    }
    return value;
}

long parse_long(const std::string& text, const std::string& what) {
    long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError("config: " + what + " must be an integer, found '" + text + "'");
    }
    return value;
}

double parse_double(const std::string& text, const std::string& what) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError("config: " + what + " must be a number, found '" + text + "'");
    }
    return value;
}

GridSpec parse_grid(const ConfigFile& file, const std::string& section, GridSpec fallback) {
    const ConfigSection* s = file.find(section);
    if (s == nullptr) return fallback;
    GridSpec grid;
    for (const auto& [axis, value] : s->entries) {
        std::vector<HyperValue> values;
        for (const std::string& item : split_list(value)) {
            values.push_back(parse_hyper_value(item));
        }
        grid.axes.emplace_back(axis, std::move(values));
    }
    if (grid.axes.empty()) {
        throw ConfigError("config: section [" + section + "] declares no axes");
    }
    return grid;
}

}  // namespace

HyperValue parse_hyper_value(const std::string& text) {
    std::int64_t i = 0;
    auto [iptr, iec] = std::from_chars(text.data(), text.data() + text.size(), i);
    if (iec == std::errc{} && iptr == text.data() + text.size()) return HyperValue{i};
    double d = 0.0;
    auto [dptr, dec] = std::from_chars(text.data(), text.data() + text.size(), d);
    if (dec == std::errc{} && dptr == text.data() + text.size()) return HyperValue{d};
    return HyperValue{text};
}

const CohortSchema& ExperimentConfig::schema() const {
    if (!schema_path) return default_schema();
    static std::map<std::string, CohortSchema> cache;
    auto key = schema_path->string();
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, load_schema(*schema_path)).first;
    return it->second;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path,
                                             std::optional<std::uint64_t> seed_override) {
    return from_config(ConfigFile::load(path), seed_override);
}

ExperimentConfig ExperimentConfig::from_config(const ConfigFile& file,
                                               std::optional<std::uint64_t> seed_override) {
    ExperimentConfig cfg;
    cfg.output_dir = file.get("experiment", "output_dir", "out");
    if (auto seed = file.maybe("experiment", "seed")) {
        cfg.seed = parse_u64(*seed, "seed");
    } else if (!seed_override) {
        throw ConfigError("config: missing key 'seed' in section [experiment]");
    }
    if (seed_override) cfg.seed = *seed_override;
    cfg.test_fraction =
        parse_double(file.get("experiment", "test_fraction", "0.2"), "test_fraction");
    if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0)) {
        throw ConfigError("config: test_fraction must be in (0, 1)");
    }
    if (auto schema = file.maybe("experiment", "schema")) cfg.schema_path = *schema;

    cfg.preprocess.label_threshold_days =
        parse_long(file.get("preprocess", "label_threshold_days", "1095"), "label_threshold_days");
    cfg.preprocess.min_followup_days =
        parse_long(file.get("preprocess", "min_followup_days", "1095"), "min_followup_days");
    if (cfg.preprocess.label_threshold_days <= 0 || cfg.preprocess.min_followup_days <= 0) {
        throw ConfigError("config: preprocess thresholds must be strictly positive");
    }

    // enum parsers raise invalid_argument; surface those as config errors
    auto as_config_error = [](auto&& parse) -> decltype(parse()) {
        try {
            return parse();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
    };

    if (file.find("generator") != nullptr) {
        GeneratorSpec gen;
        gen.size = parse_u64(file.get("generator", "size"), "generator size");
        gen.signal = as_config_error(
            [&] { return signal_placement_from_string(file.get("generator", "signal", "split")); });
        gen.signal_strength =
            parse_double(file.get("generator", "signal_strength", "2.5"), "signal_strength");
        gen.noiseless = parse_bool(file.get("generator", "noiseless", "false"));
        gen.at_risk_fraction =
            parse_double(file.get("generator", "at_risk_fraction", "0.45"), "at_risk_fraction");
        gen.outcome_failures =
            parse_u64(file.get("generator", "outcome_failures", "0"), "outcome_failures");
        gen.missing_failures =
            parse_u64(file.get("generator", "missing_failures", "0"), "missing_failures");
        gen.domain_failures =
            parse_u64(file.get("generator", "domain_failures", "0"), "domain_failures");
        cfg.generator = gen;
    }

    cfg.stacking.k = parse_u64(file.get("stacking", "k", "5"), "stacking k");
    if (cfg.stacking.k < 2) throw ConfigError("config: stacking k must be at least 2");
    cfg.stacking.protocol = as_config_error([&] {
        return meta_protocol_from_string(file.get("stacking", "protocol", "out_of_fold"));
    });
    cfg.stacking.features = as_config_error([&] {
        return meta_feature_set_from_string(
            file.get("stacking", "meta_features", "labels_and_confidences"));
    });
    cfg.stacking.seed = cfg.seed;
    cfg.stacking.clinical_grid = parse_grid(file, "grid.clinical", default_logistic_grid());
    cfg.stacking.echo_grid = parse_grid(file, "grid.echo", default_logistic_grid());
    cfg.stacking.forest_grid = parse_grid(file, "grid.forest", default_forest_grid());
    cfg.stacking.meta_grid = parse_grid(file, "grid.meta", default_logistic_grid());
    cfg.tree_grid = parse_grid(file, "grid.tree", default_tree_grid());
    cfg.svc_grid = parse_grid(file, "grid.svc", default_svc_grid());
    return cfg;
}

}  // namespace hfstrat
