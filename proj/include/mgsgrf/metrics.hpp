#pragma once

#include <functional>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "mgsgrf/multioutput.hpp"
#include "mgsgrf/types.hpp"

namespace mgsgrf {

/// Set of distinct categorical vectors, usually built from the minority rows
/// of an original dataset. Membership is exact vector equality.
class CombinationSet {
public:
    static CombinationSet from_rows(const MatrixRi& cat);
    static CombinationSet from_rows(const MatrixRi& cat, std::span<const Index> rows);

    bool contains(std::span<const int> combo) const;
    std::size_t size() const { return combos_.size(); }

private:
    std::set<std::vector<int>> combos_;
};

/// Fraction of rows whose categorical vector appears in the reference set.
/// Errors on an empty synthetic block (callers decide conventions for
/// strategies that generate nothing).
double coherence(const MatrixRi& synthetic_cat, const CombinationSet& reference);

struct ScoredLabels {
    std::vector<double> scores;
    std::vector<int> labels;  // 0/1
};

/// Mann-Whitney statistic; tied scores count one half.
double roc_auc(const ScoredLabels& s);

/// Average precision: step-wise integral of precision over recall increments
/// in a descending-score sweep with tied scores grouped.
double pr_auc(const ScoredLabels& s);

/// Maximum precision over the operating points whose recall is at least
/// `min_recall`.
double precision_at_recall(const ScoredLabels& s, double min_recall);

struct CurvePoint {
    double x;
    double y;
};

/// Operating points of the PR curve, one per distinct threshold, as (recall,
/// precision). The ROC variant yields (fpr, tpr) including the (0,0) anchor.
std::vector<CurvePoint> pr_curve_points(const ScoredLabels& s);
std::vector<CurvePoint> roc_curve_points(const ScoredLabels& s);

using BayesPredictor = std::function<Eigen::RowVectorXi(std::span<const double>)>;

struct AssociationResult {
    double value = 0.0;          // 1 - (loo_error - bayes_error) when adjusted, else LOO accuracy
    double loo_accuracy = 0.0;
    bool bayes_adjusted = false;
    double bayes_error = 0.0;
};

/// Leave-one-out over the given rows: train the classifier on n-1 rows and
/// predict the held-out full categorical vector (an error is any mismatch).
/// With a Bayes predictor the excess-risk form is reported; without it the
/// raw LOO accuracy. `jobs` parallelizes the folds without changing results.
AssociationResult association(const MultiOutputFactory& factory, const MatrixRd& cont,
                              const MatrixRi& cat, const std::vector<int>& cardinalities,
                              const BayesPredictor* bayes = nullptr, int jobs = 1);

}  // namespace mgsgrf
