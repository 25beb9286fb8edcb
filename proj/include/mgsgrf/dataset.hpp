#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mgsgrf/rng.hpp"
#include "mgsgrf/types.hpp"

namespace mgsgrf {

enum class ColumnKind { Continuous, Categorical, Label };

/// Column layout of a CSV source plus the string<->code dictionaries for
/// categorical columns. Dictionaries grow as new modalities are seen at load
/// time and can be serialized for reproducible code assignment.
class Schema {
public:
    struct Column {
        std::string name;
        ColumnKind kind;
    };

    Schema() = default;
    explicit Schema(std::vector<Column> columns);

    const std::vector<Column>& columns() const { return columns_; }
    int continuous_count() const { return d_; }
    int categorical_count() const { return p_; }

    const std::string& label_name() const;
    /// Names in dataset order (continuous block then categorical block).
    std::vector<std::string> continuous_names() const;
    std::vector<std::string> categorical_names() const;

    /// Code for a modality of categorical column `cat_index` (order within the
    /// categorical block), inserting a fresh code when unseen.
    int encode(int cat_index, const std::string& value);
    /// Code lookup without insertion; nullopt when the modality is unknown.
    std::optional<int> find_code(int cat_index, const std::string& value) const;
    const std::string& decode(int cat_index, int code) const;
    int cardinality(int cat_index) const;
    std::vector<int> cardinalities() const;

private:
    std::vector<Column> columns_;
    int d_ = 0;
    int p_ = 0;
    int label_pos_ = -1;
    std::vector<std::vector<std::string>> code_to_name_;  // per categorical column
    std::vector<std::unordered_map<std::string, int>> name_to_code_;
};

/// Immutable mixed-feature table: an N x d continuous block, an N x p block of
/// categorical codes, and a binary label vector.
class MixedDataset {
public:
    MixedDataset(MatrixRd continuous, MatrixRi categorical,
                 std::vector<int> labels, std::vector<int> cardinalities);

    Index rows() const { return static_cast<Index>(labels_.size()); }
    int d() const { return static_cast<int>(continuous_.cols()); }
    int p() const { return static_cast<int>(categorical_.cols()); }

    const MatrixRd& continuous() const { return continuous_; }
    const MatrixRi& categorical() const { return categorical_; }
    const std::vector<int>& labels() const { return labels_; }
    const std::vector<int>& cardinalities() const { return cardinalities_; }

    Index minority_count() const { return n_minority_; }
    Index majority_count() const { return rows() - n_minority_; }
    bool is_imbalanced() const { return n_minority_ < majority_count(); }

    std::vector<Index> minority_indices() const;
    std::vector<Index> majority_indices() const;

    /// Rows restricted to an index subset, order preserved.
    MixedDataset select_rows(const std::vector<Index>& idx) const;

private:
    MatrixRd continuous_;
    MatrixRi categorical_;
    std::vector<int> labels_;
    std::vector<int> cardinalities_;
    Index n_minority_ = 0;
};

struct SubsampleResult {
    MixedDataset data;
    bool already_below_ratio;  // warning flag: requested ratio was a no-op
};

/// Removes uniformly chosen minority rows until n/N is as close as possible to
/// `ratio`. Majority rows are untouched; surviving rows keep their order.
/// Retained count solves n' = round(ratio * majority / (1 - ratio)).
SubsampleResult subsample_to_ratio(const MixedDataset& ds, double ratio, Rng& rng);

/// Z-score parameters of the continuous block, fitted on a training split.
/// Constant columns are flagged and passed through unscaled (std kept at 1).
class Scaler {
public:
    static Scaler fit(const MixedDataset& train);

    MixedDataset apply(const MixedDataset& ds) const;

    const Eigen::VectorXd& mean() const { return mean_; }
    const Eigen::VectorXd& std() const { return std_; }
    const std::vector<bool>& constant_columns() const { return constant_; }

private:
    Eigen::VectorXd mean_;
    Eigen::VectorXd std_;  // population convention (divide by N)
    std::vector<bool> constant_;
};

}  // namespace mgsgrf
