#include "hfstrat/schema.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace hfstrat {

using json = nlohmann::ordered_json;

bool FeatureSpec::in_domain(const FeatureValue& v) const {
    switch (kind) {
        case FeatureKind::Numeric: {
            const double* d = std::get_if<double>(&v);
            return d != nullptr && std::isfinite(*d) && *d >= min && *d <= max;
        }
        case FeatureKind::Binary: {
            const double* d = std::get_if<double>(&v);
            return d != nullptr && (*d == 0.0 || *d == 1.0);
        }
        case FeatureKind::Categorical: {
            const std::string* s = std::get_if<std::string>(&v);
            if (s == nullptr) return false;
            for (const auto& c : categories) {
                if (c == *s) return true;
            }
            return false;
        }
    }
    return false;
}

const FeatureSpec* CohortSchema::find(const std::string& name) const {
    for (const auto& f : features) {
        if (f.name == name) return &f;
    }
    return nullptr;
}

std::size_t CohortSchema::count_group(FeatureGroup g) const {
    std::size_t n = 0;
    for (const auto& f : features) {
        if (f.group == g) ++n;
    }
    return n;
}

void CohortSchema::validate() const {
    std::set<std::string> seen;
    for (const auto& f : features) {
        if (f.name.empty()) throw std::invalid_argument("schema: empty feature name");
        if (!seen.insert(f.name).second) {
            throw std::invalid_argument("schema: duplicate feature name '" + f.name + "'");
        }
        if (f.kind == FeatureKind::Numeric && f.min > f.max) {
            throw std::invalid_argument("schema: numeric range min > max for '" + f.name + "'");
        }
        if (f.kind == FeatureKind::Categorical && f.categories.empty()) {
            throw std::invalid_argument("schema: empty categorical domain for '" + f.name + "'");
        }
    }
}

namespace {

FeatureSpec numeric(std::string name, FeatureGroup g, double min, double max) {
    FeatureSpec f;
    f.name = std::move(name);
    f.group = g;
    f.kind = FeatureKind::Numeric;
    f.min = min;
    f.max = max;
    return f;
}

FeatureSpec binary(std::string name, FeatureGroup g) {
    FeatureSpec f;
    f.name = std::move(name);
    f.group = g;
    f.kind = FeatureKind::Binary;
    return f;
}

FeatureSpec categorical(std::string name, FeatureGroup g, std::vector<std::string> cats) {
    FeatureSpec f;
    f.name = std::move(name);
    f.group = g;
    f.kind = FeatureKind::Categorical;
    f.categories = std::move(cats);
    return f;
}

CohortSchema build_default_schema() {
    using enum FeatureGroup;
    CohortSchema s;
    s.features = {
        // Clinical (15)
        categorical("Primary_Diagnosis", Clinical,
                    {"Ischemic", "Hypertensive", "Dilated", "Valvular", "Other"}),
        categorical("Secondary_Diagnosis", Clinical,
                    {"None", "Ischemic", "Hypertensive", "Dilated", "Valvular", "Other"}),
        categorical("HFpEF", Clinical, {"HFrEF", "HFmrEF", "HFpEF"}),
        numeric("EF", Clinical, 5.0, 85.0),
        categorical("NYHA", Clinical, {"I", "II", "III", "IV"}),
        numeric("Age", Clinical, 18.0, 105.0),
        numeric("BMI", Clinical, 12.0, 60.0),
        binary("Sex", Clinical),
        binary("Hypertension", Clinical),
        binary("Dyslipidemia", Clinical),
        binary("Diabetic", Clinical),
        binary("Bronchopneumonia", Clinical),
        binary("Beta-Blocker", Clinical),
        binary("ACE_SART", Clinical),
        binary("Anti-Aldosterone", Clinical),
        // Echocardiographic (18)
        numeric("PARETE POST", Echocardiographic, 4.0, 22.0),
        numeric("SETTO", Echocardiographic, 4.0, 26.0),
        numeric("LVES_DIAM", Echocardiographic, 15.0, 85.0),
        numeric("LVED_DIAM", Echocardiographic, 25.0, 95.0),
        numeric("VDx", Echocardiographic, 12.0, 62.0),
        numeric("LVMI", Echocardiographic, 40.0, 260.0),
        numeric("ASx", Echocardiographic, 18.0, 75.0),
        numeric("TAPSE", Echocardiographic, 4.0, 36.0),
        binary("RS", Echocardiographic),
        binary("BBSx", Echocardiographic),
        binary("BBDx", Echocardiographic),
        numeric("NT-proBNP", Echocardiographic, 5.0, 36000.0),
        numeric("Blood Creatinine Level", Echocardiographic, 0.2, 12.0),
        numeric("Glucose", Echocardiographic, 40.0, 420.0),
        binary("FA", Echocardiographic),
        binary("Flutter", Echocardiographic),
        binary("PM", Echocardiographic),
        numeric("Hb", Echocardiographic, 4.0, 22.0),
    };
    s.validate();
    return s;
}

FeatureGroup parse_group(const std::string& s) {
    if (s == "clinical") return FeatureGroup::Clinical;
    if (s == "echocardiographic") return FeatureGroup::Echocardiographic;
    throw std::invalid_argument("schema: unknown group '" + s + "'");
}

FeatureKind parse_kind(const std::string& s) {
    if (s == "numeric") return FeatureKind::Numeric;
    if (s == "binary") return FeatureKind::Binary;
    if (s == "categorical") return FeatureKind::Categorical;
    throw std::invalid_argument("schema: unknown kind '" + s + "'");
}

}  // namespace

const CohortSchema& default_schema() {
    static const CohortSchema schema = build_default_schema();
    return schema;
}

std::string to_string(FeatureGroup g) {
    return g == FeatureGroup::Clinical ? "clinical" : "echocardiographic";
}

std::string to_string(FeatureKind k) {
    switch (k) {
        case FeatureKind::Numeric: return "numeric";
        case FeatureKind::Binary: return "binary";
        case FeatureKind::Categorical: return "categorical";
    }
    return "numeric";
}

CohortSchema load_schema(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open schema file: " + path.string());
    json doc = json::parse(in);

    CohortSchema s;
    for (const auto& jf : doc.at("features")) {
        FeatureSpec f;
        f.name = jf.at("name").get<std::string>();
        f.group = parse_group(jf.at("group").get<std::string>());
        f.kind = parse_kind(jf.at("kind").get<std::string>());
        if (f.kind == FeatureKind::Numeric) {
            f.min = jf.at("min").get<double>();
            f.max = jf.at("max").get<double>();
        } else if (f.kind == FeatureKind::Categorical) {
            f.categories = jf.at("categories").get<std::vector<std::string>>();
        }
        if (jf.contains("required")) f.required = jf.at("required").get<bool>();
        s.features.push_back(std::move(f));
    }
    s.validate();
    return s;
}

void save_schema(const CohortSchema& schema, const std::filesystem::path& path) {
    json doc;
    doc["features"] = json::array();
    for (const auto& f : schema.features) {
        json jf;
        jf["name"] = f.name;
        jf["group"] = to_string(f.group);
        jf["kind"] = to_string(f.kind);
        if (f.kind == FeatureKind::Numeric) {
            jf["min"] = f.min;
            jf["max"] = f.max;
        } else if (f.kind == FeatureKind::Categorical) {
            jf["categories"] = f.categories;
        }
        jf["required"] = f.required;
        doc["features"].push_back(std::move(jf));
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write schema file: " + path.string());
    out << doc.dump(2) << "\n";
}

}  // namespace hfstrat
