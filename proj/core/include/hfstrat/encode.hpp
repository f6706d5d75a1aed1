#pragma once

#include <map>
#include <string>
#include <vector>

#include "hfstrat/cohort.hpp"
#include "hfstrat/matrix.hpp"

namespace hfstrat {

/// One column of the encoded design matrix and the feature it came from.
struct EncodedColumn {
    std::string name;      // e.g. "EF" or "NYHA=II"
    std::string feature;   // source feature name
    FeatureGroup group = FeatureGroup::Clinical;
    FeatureKind kind = FeatureKind::Numeric;
    std::string category;  // set for one-hot columns
};

/// Deterministic column layout derived from the schema alone: numeric and
/// binary features pass through, categorical features expand to one-hot
/// blocks over the declared domain (not the observed values), in schema
/// order. Train and test encodings therefore always align.
struct EncodingLayout {
    std::vector<EncodedColumn> columns;

    static EncodingLayout from_schema(const CohortSchema& schema);

    std::size_t size() const { return columns.size(); }
    std::vector<std::size_t> group_columns(FeatureGroup g) const;
    std::vector<std::size_t> numeric_columns() const;

    /// Hex FNV-1a over the column layout; ties a trained model to the
    /// encoding that produced it.
    std::string schema_hash() const;

    /// Encode one complete, in-domain record. Throws on missing values or
    /// unknown categories.
    std::vector<double> encode_record(const std::map<std::string, FeatureValue>& values) const;

    /// Encode only the features of `present`; the other group's columns are
    /// zero-filled and must never be read (degraded-prediction path). The
    /// present group itself must be complete.
    std::vector<double> encode_record_group(const std::map<std::string, FeatureValue>& values,
                                            FeatureGroup present) const;

    /// Inverse of encode_record for well-formed rows.
    std::map<std::string, FeatureValue> decode_row(std::span<const double> row) const;
};

/// Encoded cohort: features, labels, and the layout metadata learners and
/// the stacking ensemble slice by group.
struct DesignMatrix {
    Matrix x;
    std::vector<int> y;
    EncodingLayout layout;

    std::size_t rows() const { return x.rows(); }
    std::size_t cols() const { return x.cols(); }
};

DesignMatrix encode(const LabeledCohort& cohort);

/// Disjoint column partition into (clinical, echocardiographic) blocks.
std::pair<DesignMatrix, DesignMatrix> split_columns(const DesignMatrix& dm);

}  // namespace hfstrat
