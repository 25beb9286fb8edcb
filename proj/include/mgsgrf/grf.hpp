#pragma once

#include <span>
#include <vector>

#include "mgsgrf/rng.hpp"
#include "mgsgrf/types.hpp"

namespace mgsgrf {

struct GrfConfig {
    int n_trees = 100;
    int min_samples_split = 2;
    int max_features = 0;  // 0 -> floor(sqrt(d)), at least 1
    bool bootstrap = true;
    // Leaf lists hold all n training rows routed post-build; set false to
    // restrict them to the distinct in-bag rows of each tree.
    bool leaf_contains_all_rows = true;
};

/// One CART tree over continuous inputs grown against the categorical block
/// as a multi-output target (mean Gini across outputs). Split thresholds are
/// midpoints of consecutive observed values. Leaves carry the training rows
/// routed into them.
class GrfTree {
public:
    struct Node {
        int feature = -1;       // -1 for leaves
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        int leaf = -1;          // index into leaf_rows_ for leaves
    };

    static GrfTree build(const MatrixRd& cont, const MatrixRi& cat,
                         const std::vector<int>& cardinalities, const GrfConfig& cfg, Rng& rng);

    int route(std::span<const double> x) const;
    const std::vector<std::vector<Index>>& leaf_rows() const { return leaf_rows_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Index>& bootstrap_rows() const { return bootstrap_rows_; }

private:
    std::vector<Node> nodes_;
    std::vector<std::vector<Index>> leaf_rows_;
    std::vector<Index> bootstrap_rows_;
};

/// Forest whose prediction step weights every training sample by its
/// frequency of sharing a leaf with the query:
///   w(z)[i] = (1/T) * sum_k 1{row i in leaf_k(z)} / |leaf_k(z)|.
/// Drawing a row index from w and copying its whole categorical vector yields
/// combinations that always exist among the training rows.
class GrfForest {
public:
    static GrfForest fit(const MatrixRd& cont, const MatrixRi& cat,
                         const std::vector<int>& cardinalities, const GrfConfig& cfg, Rng& rng);

    Eigen::VectorXd weights(std::span<const double> z) const;
    Index sample_index(std::span<const double> z, Rng& rng) const;
    Eigen::RowVectorXi sample(std::span<const double> z, Rng& rng) const;

    const std::vector<GrfTree>& trees() const { return trees_; }
    const MatrixRi& training_categorical() const { return train_cat_; }
    Index training_rows() const { return train_cat_.rows(); }

private:
    std::vector<GrfTree> trees_;
    MatrixRi train_cat_;
};

}  // namespace mgsgrf
