#include "mgsgrf/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace mgsgrf {

CombinationSet CombinationSet::from_rows(const MatrixRi& cat) {
    std::vector<Index> all(static_cast<std::size_t>(cat.rows()));
    std::iota(all.begin(), all.end(), Index{0});
    return from_rows(cat, all);
}

CombinationSet CombinationSet::from_rows(const MatrixRi& cat, std::span<const Index> rows) {
    CombinationSet set;
    for (Index r : rows) {
        std::vector<int> combo(static_cast<std::size_t>(cat.cols()));
        for (Index j = 0; j < cat.cols(); ++j) combo[static_cast<std::size_t>(j)] = cat(r, j);
        set.combos_.insert(std::move(combo));
    }
    return set;
}

bool CombinationSet::contains(std::span<const int> combo) const {
    return combos_.count(std::vector<int>(combo.begin(), combo.end())) > 0;
}

double coherence(const MatrixRi& synthetic_cat, const CombinationSet& reference) {
    if (synthetic_cat.rows() == 0)
        throw std::invalid_argument("coherence: no synthetic rows to assess");
    Index hits = 0;
    for (Index i = 0; i < synthetic_cat.rows(); ++i) {
        std::span<const int> combo{synthetic_cat.row(i).data(),
                                   static_cast<std::size_t>(synthetic_cat.cols())};
        hits += reference.contains(combo);
    }
    return static_cast<double>(hits) / static_cast<double>(synthetic_cat.rows());
}

namespace {

struct Counts {
    std::int64_t positives = 0;
    std::int64_t negatives = 0;
};

Counts check_scored(const ScoredLabels& s) {
    if (s.scores.size() != s.labels.size() || s.scores.empty())
        throw std::invalid_argument("scored labels: need equal-length, non-empty score/label vectors");
    Counts c;
    for (int y : s.labels) {
        if (y != 0 && y != 1) throw std::invalid_argument("scored labels: labels must be 0/1");
        ++(y == 1 ? c.positives : c.negatives);
    }
    if (c.positives == 0 || c.negatives == 0)
        throw std::invalid_argument("scored labels: need at least one positive and one negative");
    return c;
}

// Indices sorted by descending score; equal scores form one threshold group.
std::vector<std::size_t> descending_order(const ScoredLabels& s) {
    std::vector<std::size_t> order(s.scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return s.scores[a] > s.scores[b]; });
    return order;
}

// Visits each distinct-score operating point with cumulative (tp, fp).
template <class Visitor>
void sweep_thresholds(const ScoredLabels& s, Visitor&& visit) {
    const auto order = descending_order(s);
    std::int64_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && s.scores[order[j]] == s.scores[order[i]]) {
            ++(s.labels[order[j]] == 1 ? tp : fp);
            ++j;
        }
        visit(tp, fp);
        i = j;
    }
}

}  // namespace

double roc_auc(const ScoredLabels& s) {
    const Counts c = check_scored(s);
    // Rank-sum with average ranks over tied scores.
    std::vector<std::size_t> order(s.scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return s.scores[a] < s.scores[b]; });
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        std::int64_t tied_pos = 0;
        while (j < order.size() && s.scores[order[j]] == s.scores[order[i]]) {
            tied_pos += s.labels[order[j]];
            ++j;
        }
        const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        rank_sum_pos += avg_rank * static_cast<double>(tied_pos);
        i = j;
    }
    const double n1 = static_cast<double>(c.positives);
    const double n0 = static_cast<double>(c.negatives);
    return (rank_sum_pos - n1 * (n1 + 1.0) / 2.0) / (n1 * n0);
}

double pr_auc(const ScoredLabels& s) {
    const Counts c = check_scored(s);
    double ap = 0.0;
    std::int64_t prev_tp = 0;
    sweep_thresholds(s, [&](std::int64_t tp, std::int64_t fp) {
        if (tp > prev_tp) {
            const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
            ap += precision * static_cast<double>(tp - prev_tp) / static_cast<double>(c.positives);
        }
        prev_tp = tp;
    });
    return ap;
}

double precision_at_recall(const ScoredLabels& s, double min_recall) {
    if (!(min_recall > 0.0 && min_recall <= 1.0))
        throw std::invalid_argument("precision_at_recall: recall threshold must lie in (0,1]");
    const Counts c = check_scored(s);
    double best = 0.0;
    sweep_thresholds(s, [&](std::int64_t tp, std::int64_t fp) {
        const double recall = static_cast<double>(tp) / static_cast<double>(c.positives);
        if (recall >= min_recall)
            best = std::max(best, static_cast<double>(tp) / static_cast<double>(tp + fp));
    });
    return best;
}

std::vector<CurvePoint> pr_curve_points(const ScoredLabels& s) {
    const Counts c = check_scored(s);
    std::vector<CurvePoint> points;
    sweep_thresholds(s, [&](std::int64_t tp, std::int64_t fp) {
        points.push_back({static_cast<double>(tp) / static_cast<double>(c.positives),
                          static_cast<double>(tp) / static_cast<double>(tp + fp)});
    });
    return points;
}

std::vector<CurvePoint> roc_curve_points(const ScoredLabels& s) {
    const Counts c = check_scored(s);
    std::vector<CurvePoint> points{{0.0, 0.0}};
    sweep_thresholds(s, [&](std::int64_t tp, std::int64_t fp) {
        points.push_back({static_cast<double>(fp) / static_cast<double>(c.negatives),
                          static_cast<double>(tp) / static_cast<double>(c.positives)});
    });
    return points;
}

AssociationResult association(const MultiOutputFactory& factory, const MatrixRd& cont,
                              const MatrixRi& cat, const std::vector<int>& cardinalities,
                              const BayesPredictor* bayes, int jobs) {
    const Index n = cont.rows();
    if (n < 2) throw std::invalid_argument("association: needs at least 2 rows for leave-one-out");
    if (cont.rows() != cat.rows()) throw std::invalid_argument("association: block row mismatch");

    std::vector<int> errors(static_cast<std::size_t>(n), 0);
    auto evaluate = [&](Index held_out) {
        MatrixRd train_cont(n - 1, cont.cols());
        MatrixRi train_cat(n - 1, cat.cols());
        Index w = 0;
        for (Index i = 0; i < n; ++i) {
            if (i == held_out) continue;
            train_cont.row(w) = cont.row(i);
            train_cat.row(w) = cat.row(i);
            ++w;
        }
        auto model = factory();
        model->fit(train_cont, train_cat, cardinalities);
        const Eigen::RowVectorXi pred =
            model->predict({cont.row(held_out).data(), static_cast<std::size_t>(cont.cols())});
        errors[static_cast<std::size_t>(held_out)] =
            (pred.array() != cat.row(held_out).array()).any() ? 1 : 0;
    };

    if (jobs <= 1) {
        for (Index i = 0; i < n; ++i) evaluate(i);
    } else {
        std::atomic<Index> next{0};
        auto worker = [&] {
            for (Index i = next.fetch_add(1); i < n; i = next.fetch_add(1)) evaluate(i);
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    AssociationResult result;
    const double loo_error =
        static_cast<double>(std::accumulate(errors.begin(), errors.end(), 0)) / static_cast<double>(n);
    result.loo_accuracy = 1.0 - loo_error;
    if (bayes != nullptr) {
        Index bayes_errors = 0;
        for (Index i = 0; i < n; ++i) {
            const Eigen::RowVectorXi pred =
                (*bayes)({cont.row(i).data(), static_cast<std::size_t>(cont.cols())});
            bayes_errors += (pred.array() != cat.row(i).array()).any() ? 1 : 0;
        }
        result.bayes_error = static_cast<double>(bayes_errors) / static_cast<double>(n);
        result.bayes_adjusted = true;
        result.value = 1.0 - (loo_error - result.bayes_error);
    } else {
        result.value = result.loo_accuracy;
    }
    return result;
}

}  // namespace mgsgrf
