#pragma once

// Independent reference implementations used by both the unit and acceptance
// suites. Everything here recomputes results from definitions (full sorts,
// nested loops, all-thresholds sweeps) and stays clear of the library's
// incremental code paths.

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "mgsgrf/grf.hpp"
#include "mgsgrf/metrics.hpp"
#include "mgsgrf/types.hpp"

namespace oracle {

using mgsgrf::Index;

// Pairwise-concordance ROC AUC with half-weight ties.
inline double roc_auc(const mgsgrf::ScoredLabels& s) {
    double concordant = 0.0;
    std::int64_t pairs = 0;
    for (std::size_t i = 0; i < s.labels.size(); ++i) {
        if (s.labels[i] != 1) continue;
        for (std::size_t j = 0; j < s.labels.size(); ++j) {
            if (s.labels[j] != 0) continue;
            ++pairs;
            if (s.scores[i] > s.scores[j])
                concordant += 1.0;
            else if (s.scores[i] == s.scores[j])
                concordant += 0.5;
        }
    }
    return concordant / static_cast<double>(pairs);
}

struct OperatingPoint {
    double recall;
    double precision;
};

// Every distinct score treated as a threshold; classification recomputed from
// scratch at each threshold.
inline std::vector<OperatingPoint> all_operating_points(const mgsgrf::ScoredLabels& s) {
    std::vector<double> thresholds(s.scores);
    std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    std::int64_t positives = 0;
    for (int y : s.labels) positives += y;
    std::vector<OperatingPoint> points;
    for (double t : thresholds) {
        std::int64_t tp = 0, fp = 0;
        for (std::size_t i = 0; i < s.scores.size(); ++i) {
            if (s.scores[i] >= t) ++(s.labels[i] == 1 ? tp : fp);
        }
        points.push_back({static_cast<double>(tp) / static_cast<double>(positives),
                          static_cast<double>(tp) / static_cast<double>(tp + fp)});
    }
    return points;
}

inline double pr_auc(const mgsgrf::ScoredLabels& s) {
    double ap = 0.0;
    double prev_recall = 0.0;
    for (const auto& pt : all_operating_points(s)) {
        ap += (pt.recall - prev_recall) * pt.precision;
        prev_recall = pt.recall;
    }
    return ap;
}

inline double precision_at_recall(const mgsgrf::ScoredLabels& s, double min_recall) {
    double best = 0.0;
    for (const auto& pt : all_operating_points(s))
        if (pt.recall >= min_recall) best = std::max(best, pt.precision);
    return best;
}

// Leaf-weight formula evaluated naively: route the query down each stored
// tree by walking split nodes, then average indicator/|leaf| terms.
inline Eigen::VectorXd grf_weights(const mgsgrf::GrfForest& forest, std::span<const double> z) {
    const Index n = forest.training_rows();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    for (const auto& tree : forest.trees()) {
        int node = 0;
        while (tree.nodes()[static_cast<std::size_t>(node)].leaf < 0) {
            const auto& nd = tree.nodes()[static_cast<std::size_t>(node)];
            node = z[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
        }
        const auto& rows = tree.leaf_rows()[static_cast<std::size_t>(
            tree.nodes()[static_cast<std::size_t>(node)].leaf)];
        for (Index r : rows) w[r] += 1.0 / static_cast<double>(rows.size());
    }
    return w / static_cast<double>(forest.trees().size());
}

// Weight formula on explicit leaf lists (for hand-built cases).
inline std::vector<double> weights_from_leaf_lists(const std::vector<std::vector<int>>& leaves, int n) {
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    for (const auto& leaf : leaves)
        for (int r : leaf) w[static_cast<std::size_t>(r)] += 1.0 / static_cast<double>(leaf.size());
    for (double& v : w) v /= static_cast<double>(leaves.size());
    return w;
}

// Exact k smallest by full sort of (distance, index) pairs.
inline std::vector<Index> knn_full_sort(const std::vector<double>& dists, int k) {
    std::vector<std::pair<double, Index>> order;
    for (std::size_t i = 0; i < dists.size(); ++i) order.emplace_back(dists[i], static_cast<Index>(i));
    std::sort(order.begin(), order.end());
    std::vector<Index> out;
    for (int i = 0; i < k; ++i) out.push_back(order[static_cast<std::size_t>(i)].second);
    return out;
}

}  // namespace oracle
