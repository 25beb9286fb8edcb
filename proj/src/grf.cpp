#include "mgsgrf/grf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mgsgrf {

namespace {

// Mean Gini impurity across the p outputs, times the row count. Tracked via
// sums of squared class counts so one row can move across a split in O(p).
struct SplitScan {
    const MatrixRi& cat;
    const std::vector<int>& cardinalities;
    std::vector<std::vector<std::int64_t>> left_counts;   // [output][class]
    std::vector<std::vector<std::int64_t>> right_counts;
    std::vector<double> left_sq;   // per output: sum of squared counts
    std::vector<double> right_sq;
    std::int64_t n_left = 0;
    std::int64_t n_right = 0;

    SplitScan(const MatrixRi& cat_, const std::vector<int>& cards, const std::vector<Index>& rows)
        : cat(cat_), cardinalities(cards) {
        const auto p = static_cast<std::size_t>(cat.cols());
        left_counts.resize(p);
        right_counts.resize(p);
        left_sq.assign(p, 0.0);
        right_sq.assign(p, 0.0);
        for (std::size_t j = 0; j < p; ++j) {
            left_counts[j].assign(static_cast<std::size_t>(cardinalities[j]), 0);
            right_counts[j].assign(static_cast<std::size_t>(cardinalities[j]), 0);
        }
        for (Index r : rows) push_right(r);
    }

    void push_right(Index row) {
        ++n_right;
        for (Index j = 0; j < cat.cols(); ++j) {
            auto& cnt = right_counts[static_cast<std::size_t>(j)][static_cast<std::size_t>(cat(row, j))];
            right_sq[static_cast<std::size_t>(j)] += 2.0 * static_cast<double>(cnt) + 1.0;
            ++cnt;
        }
    }

    void move_left(Index row) {
        --n_right;
        ++n_left;
        for (Index j = 0; j < cat.cols(); ++j) {
            auto& rc = right_counts[static_cast<std::size_t>(j)][static_cast<std::size_t>(cat(row, j))];
            right_sq[static_cast<std::size_t>(j)] -= 2.0 * static_cast<double>(rc) - 1.0;
            --rc;
            auto& lc = left_counts[static_cast<std::size_t>(j)][static_cast<std::size_t>(cat(row, j))];
            left_sq[static_cast<std::size_t>(j)] += 2.0 * static_cast<double>(lc) + 1.0;
            ++lc;
        }
    }

    // n_L * gini_L + n_R * gini_R, averaged over outputs. Lower is better.
    double weighted_impurity() const {
        const auto p = static_cast<double>(cat.cols());
        double total = 0.0;
        for (std::size_t j = 0; j < left_counts.size(); ++j) {
            const double gl = static_cast<double>(n_left) - left_sq[j] / static_cast<double>(n_left);
            const double gr = static_cast<double>(n_right) - right_sq[j] / static_cast<double>(n_right);
            total += gl + gr;
        }
        return total / p;
    }
};

bool node_is_pure(const MatrixRi& cat, const std::vector<Index>& rows) {
    for (Index j = 0; j < cat.cols(); ++j) {
        const int first = cat(rows.front(), j);
        for (Index r : rows)
            if (cat(r, j) != first) return false;
    }
    return true;
}

struct BestSplit {
    int feature = -1;
    double threshold = 0.0;
    double impurity = std::numeric_limits<double>::infinity();
};

BestSplit find_best_split(const MatrixRd& cont, const MatrixRi& cat,
                          const std::vector<int>& cardinalities,
                          const std::vector<Index>& rows, std::span<const int> features) {
    BestSplit best;
    std::vector<std::pair<double, Index>> order(rows.size());
    for (int f : features) {
        for (std::size_t i = 0; i < rows.size(); ++i) order[i] = {cont(rows[i], f), rows[i]};
        std::sort(order.begin(), order.end());
        if (order.front().first == order.back().first) continue;  // constant feature

        SplitScan scan(cat, cardinalities, rows);
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            scan.move_left(order[i].second);
            if (order[i].first == order[i + 1].first) continue;
            const double impurity = scan.weighted_impurity();
            // Strict < keeps the lexicographically first (feature, threshold) on ties:
            // features are scanned in the caller's sorted order, thresholds ascending.
            if (impurity < best.impurity) {
                best.impurity = impurity;
                best.feature = f;
                best.threshold = 0.5 * (order[i].first + order[i + 1].first);
            }
        }
    }
    return best;
}

}  // namespace

GrfTree GrfTree::build(const MatrixRd& cont, const MatrixRi& cat,
                       const std::vector<int>& cardinalities, const GrfConfig& cfg, Rng& rng) {
    const Index n = cont.rows();
    const int d = static_cast<int>(cont.cols());
    GrfTree tree;

    tree.bootstrap_rows_.resize(static_cast<std::size_t>(n));
    if (cfg.bootstrap) {
        for (auto& r : tree.bootstrap_rows_) r = static_cast<Index>(rng.uniform_int(0, n - 1));
    } else {
        std::iota(tree.bootstrap_rows_.begin(), tree.bootstrap_rows_.end(), Index{0});
    }

    int max_features = cfg.max_features;
    if (max_features <= 0) max_features = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(d))));
    max_features = std::min(max_features, d);

    // Recursive CART growth; candidate features drawn per node.
    struct Frame {
        std::vector<Index> rows;
        int node;
    };
    tree.nodes_.push_back(Node{});
    std::vector<Frame> stack;
    stack.push_back({tree.bootstrap_rows_, 0});

    while (!stack.empty()) {
        Frame frame = std::move(stack.back());
        stack.pop_back();

        const bool splittable = static_cast<int>(frame.rows.size()) >= cfg.min_samples_split &&
                                !node_is_pure(cat, frame.rows);
        BestSplit best;
        if (splittable) {
            auto picked = rng.sample_without_replacement(static_cast<std::size_t>(d),
                                                         static_cast<std::size_t>(max_features));
            std::vector<int> features(picked.begin(), picked.end());
            std::sort(features.begin(), features.end());
            best = find_best_split(cont, cat, cardinalities, frame.rows, features);
        }

        if (best.feature < 0) {
            tree.nodes_[static_cast<std::size_t>(frame.node)].leaf = static_cast<int>(tree.leaf_rows_.size());
            tree.leaf_rows_.emplace_back();  // filled by the routing pass below
            continue;
        }

        std::vector<Index> left_rows, right_rows;
        for (Index r : frame.rows)
            (cont(r, best.feature) <= best.threshold ? left_rows : right_rows).push_back(r);

        const int left = static_cast<int>(tree.nodes_.size());
        const int right = left + 1;
        {
            Node& node = tree.nodes_[static_cast<std::size_t>(frame.node)];
            node.feature = best.feature;
            node.threshold = best.threshold;
            node.left = left;
            node.right = right;
        }
        tree.nodes_.push_back(Node{});
        tree.nodes_.push_back(Node{});
        // Right pushed first so the left child is processed next (stable order).
        stack.push_back({std::move(right_rows), right});
        stack.push_back({std::move(left_rows), left});
    }

    // Fill leaf routing lists: either every training row, or the distinct
    // in-bag rows of this tree.
    if (cfg.leaf_contains_all_rows) {
        for (Index r = 0; r < n; ++r) {
            const double* x = cont.row(r).data();
            tree.leaf_rows_[static_cast<std::size_t>(tree.route({x, static_cast<std::size_t>(d)}))].push_back(r);
        }
    } else {
        std::vector<Index> inbag = tree.bootstrap_rows_;
        std::sort(inbag.begin(), inbag.end());
        inbag.erase(std::unique(inbag.begin(), inbag.end()), inbag.end());
        for (Index r : inbag) {
            const double* x = cont.row(r).data();
            tree.leaf_rows_[static_cast<std::size_t>(tree.route({x, static_cast<std::size_t>(d)}))].push_back(r);
        }
    }
    return tree;
}

int GrfTree::route(std::span<const double> x) const {
    int node = 0;
    while (nodes_[static_cast<std::size_t>(node)].leaf < 0) {
        const Node& nd = nodes_[static_cast<std::size_t>(node)];
        node = x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
    }
    return nodes_[static_cast<std::size_t>(node)].leaf;
}

GrfForest GrfForest::fit(const MatrixRd& cont, const MatrixRi& cat,
                         const std::vector<int>& cardinalities, const GrfConfig& cfg, Rng& rng) {
    if (cont.rows() < 2) throw std::invalid_argument("grf: needs at least 2 training rows");
    if (cont.cols() < 1 || cat.cols() < 1)
        throw std::invalid_argument("grf: needs continuous inputs and categorical outputs");
    if (cont.rows() != cat.rows()) throw std::invalid_argument("grf: input/output row mismatch");
    if (cfg.n_trees < 1) throw std::invalid_argument("grf: needs at least one tree");

    GrfForest forest;
    forest.train_cat_ = cat;
    forest.trees_.reserve(static_cast<std::size_t>(cfg.n_trees));
    const std::uint64_t base = rng.next_u64();
    for (int t = 0; t < cfg.n_trees; ++t) {
        Rng tree_rng(derive_seed({base, static_cast<std::uint64_t>(t)}));
        forest.trees_.push_back(GrfTree::build(cont, cat, cardinalities, cfg, tree_rng));
    }
    return forest;
}

Eigen::VectorXd GrfForest::weights(std::span<const double> z) const {
    const Index n = train_cat_.rows();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    for (const auto& tree : trees_) {
        const auto& rows = tree.leaf_rows()[static_cast<std::size_t>(tree.route(z))];
        const double share = 1.0 / static_cast<double>(rows.size());
        for (Index r : rows) w[r] += share;
    }
    w /= static_cast<double>(trees_.size());
    return w;
}

Index GrfForest::sample_index(std::span<const double> z, Rng& rng) const {
    const Eigen::VectorXd w = weights(z);
    return static_cast<Index>(rng.pick_weighted({w.data(), static_cast<std::size_t>(w.size())}));
}

Eigen::RowVectorXi GrfForest::sample(std::span<const double> z, Rng& rng) const {
    return train_cat_.row(sample_index(z, rng));
}

}  // namespace mgsgrf
