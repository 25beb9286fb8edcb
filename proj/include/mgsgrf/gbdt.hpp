#pragma once

#include <span>
#include <vector>

#include "mgsgrf/dataset.hpp"
#include "mgsgrf/types.hpp"

namespace mgsgrf {

struct GbdtParams {
    int rounds = 100;
    double learning_rate = 0.1;
    int max_leaves = 31;
    int max_bins = 255;
    int min_data_in_leaf = 20;
    double min_hessian_in_leaf = 1e-3;
    int max_onehot_cardinality = 64;
};

/// Gradient-boosted trees on logistic loss. Continuous columns are used
/// directly; categorical columns are one-hot expanded. Trees grow leaf-wise
/// (best split first) over histogram bins; per-sample weights scale gradients
/// and hessians.
class GbdtModel {
public:
    static GbdtModel fit(const MixedDataset& train, std::span<const double> sample_weights,
                         const GbdtParams& params);

    /// P(y=1) per row.
    Eigen::VectorXd predict_proba(const MixedDataset& ds) const;
    Eigen::VectorXd raw_scores(const MixedDataset& ds) const;

    int feature_count() const { return n_features_; }
    int tree_count() const { return static_cast<int>(trees_.size()); }

private:
    struct Node {
        int feature = -1;  // -1 for leaves
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double value = 0.0;  // shrinkage already applied
    };

    MatrixRd encode(const MixedDataset& ds) const;

    std::vector<std::vector<Node>> trees_;
    double base_score_ = 0.0;
    int n_continuous_ = 0;
    std::vector<int> cardinalities_;
    std::vector<int> onehot_offset_;
    int n_features_ = 0;
};

}  // namespace mgsgrf
