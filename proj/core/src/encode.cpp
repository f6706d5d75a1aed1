#include "hfstrat/encode.hpp"

#include <cstdio>
#include <stdexcept>

#include "hfstrat/hash.hpp"

namespace hfstrat {

std::string to_hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

EncodingLayout EncodingLayout::from_schema(const CohortSchema& schema) {
    EncodingLayout layout;
    for (const auto& f : schema.features) {
        if (f.kind == FeatureKind::Categorical) {
            for (const auto& cat : f.categories) {
                layout.columns.push_back({f.name + "=" + cat, f.name, f.group, f.kind, cat});
            }
        } else {
            layout.columns.push_back({f.name, f.name, f.group, f.kind, ""});
        }
    }
    return layout;
}

std::vector<std::size_t> EncodingLayout::group_columns(FeatureGroup g) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].group == g) out.push_back(j);
    }
    return out;
}

std::vector<std::size_t> EncodingLayout::numeric_columns() const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].kind == FeatureKind::Numeric) out.push_back(j);
    }
    return out;
}

std::string EncodingLayout::schema_hash() const {
    std::string blob;
    for (const auto& c : columns) {
        blob += c.name;
        blob += '\x1f';
        blob += to_string(c.group);
        blob += '\x1e';
    }
    return to_hex(fnv1a64(blob));
}

std::vector<double> EncodingLayout::encode_record(
    const std::map<std::string, FeatureValue>& values) const {
    std::vector<double> row(columns.size(), 0.0);
    for (std::size_t j = 0; j < columns.size(); ++j) {
        const auto& col = columns[j];
        auto it = values.find(col.feature);
        if (it == values.end()) {
            throw std::invalid_argument("encode: missing value for feature '" + col.feature + "'");
        }
        if (col.kind == FeatureKind::Categorical) {
            const std::string* s = std::get_if<std::string>(&it->second);
            if (s == nullptr) {
                throw std::invalid_argument("encode: non-categorical value for '" + col.feature + "'");
            }
            row[j] = (*s == col.category) ? 1.0 : 0.0;
        } else {
            const double* d = std::get_if<double>(&it->second);
            if (d == nullptr) {
                throw std::invalid_argument("encode: non-numeric value for '" + col.feature + "'");
            }
            row[j] = *d;
        }
    }
    // Every categorical value must have hit exactly one column of its block.
    std::map<std::string, double> block_sum;
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].kind == FeatureKind::Categorical) block_sum[columns[j].feature] += row[j];
    }
    for (const auto& [feature, sum] : block_sum) {
        if (sum != 1.0) {
            throw std::invalid_argument("encode: value of '" + feature +
                                        "' is not in the declared domain");
        }
    }
    return row;
}

std::vector<double> EncodingLayout::encode_record_group(
    const std::map<std::string, FeatureValue>& values, FeatureGroup present) const {
    std::vector<double> row(columns.size(), 0.0);
    for (std::size_t j = 0; j < columns.size(); ++j) {
        const auto& col = columns[j];
        if (col.group != present) continue;
        auto it = values.find(col.feature);
        if (it == values.end()) {
            throw std::invalid_argument("encode: missing value for feature '" + col.feature + "'");
        }
        if (col.kind == FeatureKind::Categorical) {
            const std::string* s = std::get_if<std::string>(&it->second);
            if (s == nullptr) {
                throw std::invalid_argument("encode: non-categorical value for '" + col.feature + "'");
            }
            row[j] = (*s == col.category) ? 1.0 : 0.0;
        } else {
            const double* d = std::get_if<double>(&it->second);
            if (d == nullptr) {
                throw std::invalid_argument("encode: non-numeric value for '" + col.feature + "'");
            }
            row[j] = *d;
        }
    }
    std::map<std::string, double> block_sum;
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].group == present && columns[j].kind == FeatureKind::Categorical) {
            block_sum[columns[j].feature] += row[j];
        }
    }
    for (const auto& [feature, sum] : block_sum) {
        if (sum != 1.0) {
            throw std::invalid_argument("encode: value of '" + feature +
                                        "' is not in the declared domain");
        }
    }
    return row;
}

std::map<std::string, FeatureValue> EncodingLayout::decode_row(
    std::span<const double> row) const {
    if (row.size() != columns.size()) {
        throw std::invalid_argument("decode: row width does not match layout");
    }
    std::map<std::string, FeatureValue> values;
    for (std::size_t j = 0; j < columns.size(); ++j) {
        const auto& col = columns[j];
        if (col.kind == FeatureKind::Categorical) {
            if (row[j] == 1.0) values[col.feature] = col.category;
        } else {
            values[col.feature] = row[j];
        }
    }
    return values;
}

DesignMatrix encode(const LabeledCohort& cohort) {
    if (cohort.size() == 0) throw std::invalid_argument("encode: empty cohort");
    DesignMatrix dm;
    dm.layout = EncodingLayout::from_schema(cohort.schema);
    dm.x = Matrix(cohort.size(), dm.layout.size());
    dm.y = cohort.labels;
    for (std::size_t i = 0; i < cohort.size(); ++i) {
        const auto row = dm.layout.encode_record(cohort.records[i].values);
        for (std::size_t j = 0; j < row.size(); ++j) dm.x(i, j) = row[j];
    }
    return dm;
}

std::pair<DesignMatrix, DesignMatrix> split_columns(const DesignMatrix& dm) {
    auto slice = [&](FeatureGroup g) {
        DesignMatrix out;
        const auto cols = dm.layout.group_columns(g);
        out.x = dm.x.select_cols(cols);
        out.y = dm.y;
        for (std::size_t j : cols) out.layout.columns.push_back(dm.layout.columns[j]);
        return out;
    };
    return {slice(FeatureGroup::Clinical), slice(FeatureGroup::Echocardiographic)};
}

}  // namespace hfstrat
