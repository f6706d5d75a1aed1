#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace hfstrat {

enum class FeatureGroup { Clinical, Echocardiographic };
enum class FeatureKind { Numeric, Binary, Categorical };

/// A feature cell: numeric and binary features hold a double, categorical
/// features hold their category token.
using FeatureValue = std::variant<double, std::string>;

struct FeatureSpec {
    std::string name;
    FeatureGroup group = FeatureGroup::Clinical;
    FeatureKind kind = FeatureKind::Numeric;
    double min = 0.0;                      // numeric range
    double max = 0.0;
    std::vector<std::string> categories;   // categorical domain, declared order
    bool required = true;

    bool in_domain(const FeatureValue& v) const;
};

/// Ordered feature list describing one cohort layout. The default schema is
/// the 33-feature clinical/echocardiographic split this project is built
/// around; alternate schemas can be loaded from JSON.
struct CohortSchema {
    std::vector<FeatureSpec> features;

    const FeatureSpec* find(const std::string& name) const;
    std::size_t count_group(FeatureGroup g) const;

    /// Throws std::invalid_argument when names collide or a domain is
    /// malformed (empty categorical domain, min > max).
    void validate() const;
};

/// The built-in 33-feature schema (15 clinical, 18 echocardiographic).
const CohortSchema& default_schema();

CohortSchema load_schema(const std::filesystem::path& path);
void save_schema(const CohortSchema& schema, const std::filesystem::path& path);

std::string to_string(FeatureGroup g);
std::string to_string(FeatureKind k);

}  // namespace hfstrat
