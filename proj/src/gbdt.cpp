#include "mgsgrf/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

#include <fmt/format.h>

namespace mgsgrf {

namespace {

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

// Per-feature bin boundaries: values with x <= bound[b] fall into bin b.
// The last bin is unbounded. At most max_bins bins per feature.
struct BinMapper {
    std::vector<std::vector<double>> upper;  // per feature, ascending, size bins-1

    static BinMapper build(const MatrixRd& x, int max_bins) {
        BinMapper mapper;
        const Index n = x.rows();
        mapper.upper.resize(static_cast<std::size_t>(x.cols()));
        std::vector<double> values(static_cast<std::size_t>(n));
        for (Index f = 0; f < x.cols(); ++f) {
            for (Index i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = x(i, f);
            std::sort(values.begin(), values.end());
            values.erase(std::unique(values.begin(), values.end()), values.end());
            auto& bounds = mapper.upper[static_cast<std::size_t>(f)];
            if (static_cast<int>(values.size()) <= max_bins) {
                for (std::size_t v = 0; v + 1 < values.size(); ++v)
                    bounds.push_back(0.5 * (values[v] + values[v + 1]));
            } else {
                // Quantile cuts over the distinct values.
                for (int b = 1; b < max_bins; ++b) {
                    const auto pos = static_cast<std::size_t>(
                        static_cast<double>(b) * static_cast<double>(values.size()) /
                        static_cast<double>(max_bins));
                    const double cut = 0.5 * (values[pos - 1] + values[pos]);
                    if (bounds.empty() || cut > bounds.back()) bounds.push_back(cut);
                }
            }
        }
        return mapper;
    }

    int bins(Index f) const { return static_cast<int>(upper[static_cast<std::size_t>(f)].size()) + 1; }

    int bin_of(Index f, double value) const {
        const auto& bounds = upper[static_cast<std::size_t>(f)];
        return static_cast<int>(std::lower_bound(bounds.begin(), bounds.end(), value) - bounds.begin());
    }
};

struct Histogram {
    std::vector<double> grad;
    std::vector<double> hess;
    std::vector<int> count;

    void reset(std::size_t total_bins) {
        grad.assign(total_bins, 0.0);
        hess.assign(total_bins, 0.0);
        count.assign(total_bins, 0);
    }

    void subtract(const Histogram& other) {
        for (std::size_t i = 0; i < grad.size(); ++i) {
            grad[i] -= other.grad[i];
            hess[i] -= other.hess[i];
            count[i] -= other.count[i];
        }
    }
};

struct SplitCandidate {
    double gain = 0.0;
    int feature = -1;
    int bin = -1;  // rows with bin <= this go left
    double g_left = 0.0, h_left = 0.0;
    int n_left = 0;
};

struct LeafState {
    std::vector<Index> rows;
    double g_total = 0.0;
    double h_total = 0.0;
    Histogram hist;
    SplitCandidate best;
    int node = -1;  // index into the growing tree
};

}  // namespace

MatrixRd GbdtModel::encode(const MixedDataset& ds) const {
    MatrixRd out = MatrixRd::Zero(ds.rows(), n_features_);
    out.leftCols(n_continuous_) = ds.continuous();
    for (int j = 0; j < static_cast<int>(cardinalities_.size()); ++j) {
        const int base = onehot_offset_[static_cast<std::size_t>(j)];
        for (Index i = 0; i < ds.rows(); ++i) out(i, base + ds.categorical()(i, j)) = 1.0;
    }
    return out;
}

GbdtModel GbdtModel::fit(const MixedDataset& train, std::span<const double> sample_weights,
                         const GbdtParams& params) {
    const Index n = train.rows();
    if (train.minority_count() == 0 || train.minority_count() == n)
        throw std::invalid_argument("gbdt: training data must contain both classes");
    if (!sample_weights.empty() && static_cast<Index>(sample_weights.size()) != n)
        throw std::invalid_argument("gbdt: sample weight length mismatch");

    GbdtModel model;
    model.n_continuous_ = train.d();
    model.cardinalities_ = train.cardinalities();
    model.onehot_offset_.clear();
    int features = train.d();
    for (int card : model.cardinalities_) {
        if (card > params.max_onehot_cardinality)
            throw std::invalid_argument(
                fmt::format("gbdt: categorical cardinality {} exceeds the one-hot guard of {}",
                            card, params.max_onehot_cardinality));
        model.onehot_offset_.push_back(features);
        features += card;
    }
    model.n_features_ = features;

    const MatrixRd x = model.encode(train);
    const BinMapper mapper = BinMapper::build(x, params.max_bins);

    // Feature-major bin matrix for cache-friendly histogram accumulation.
    std::vector<int> bin_offset(static_cast<std::size_t>(features) + 1, 0);
    for (int f = 0; f < features; ++f)
        bin_offset[static_cast<std::size_t>(f) + 1] = bin_offset[static_cast<std::size_t>(f)] + mapper.bins(f);
    const std::size_t total_bins = static_cast<std::size_t>(bin_offset.back());
    std::vector<std::uint8_t> bins(static_cast<std::size_t>(n) * static_cast<std::size_t>(features));
    for (int f = 0; f < features; ++f) {
        std::uint8_t* col = bins.data() + static_cast<std::size_t>(f) * static_cast<std::size_t>(n);
        for (Index i = 0; i < n; ++i) col[i] = static_cast<std::uint8_t>(mapper.bin_of(f, x(i, f)));
    }

    std::vector<double> weights(static_cast<std::size_t>(n), 1.0);
    if (!sample_weights.empty()) weights.assign(sample_weights.begin(), sample_weights.end());

    double pos_mass = 0.0, total_mass = 0.0;
    for (Index i = 0; i < n; ++i) {
        total_mass += weights[static_cast<std::size_t>(i)];
        if (train.labels()[static_cast<std::size_t>(i)] == 1) pos_mass += weights[static_cast<std::size_t>(i)];
    }
    const double base_rate = pos_mass / total_mass;
    model.base_score_ = std::log(base_rate / (1.0 - base_rate));

    std::vector<double> scores(static_cast<std::size_t>(n), model.base_score_);
    std::vector<double> grad(static_cast<std::size_t>(n));
    std::vector<double> hess(static_cast<std::size_t>(n));

    auto build_histogram = [&](LeafState& leaf) {
        leaf.hist.reset(total_bins);
        for (int f = 0; f < features; ++f) {
            const std::uint8_t* col = bins.data() + static_cast<std::size_t>(f) * static_cast<std::size_t>(n);
            const int base = bin_offset[static_cast<std::size_t>(f)];
            for (Index r : leaf.rows) {
                const int slot = base + col[r];
                leaf.hist.grad[static_cast<std::size_t>(slot)] += grad[static_cast<std::size_t>(r)];
                leaf.hist.hess[static_cast<std::size_t>(slot)] += hess[static_cast<std::size_t>(r)];
                ++leaf.hist.count[static_cast<std::size_t>(slot)];
            }
        }
    };

    auto find_best_split = [&](LeafState& leaf) {
        leaf.best = SplitCandidate{};
        const double parent_score = leaf.g_total * leaf.g_total / leaf.h_total;
        const int n_parent = static_cast<int>(leaf.rows.size());
        for (int f = 0; f < features; ++f) {
            const int base = bin_offset[static_cast<std::size_t>(f)];
            const int nb = mapper.bins(f);
            double gl = 0.0, hl = 0.0;
            int cl = 0;
            for (int b = 0; b + 1 < nb; ++b) {
                gl += leaf.hist.grad[static_cast<std::size_t>(base + b)];
                hl += leaf.hist.hess[static_cast<std::size_t>(base + b)];
                cl += leaf.hist.count[static_cast<std::size_t>(base + b)];
                const int cr = n_parent - cl;
                if (cl < params.min_data_in_leaf || cr < params.min_data_in_leaf) continue;
                const double hr = leaf.h_total - hl;
                if (hl < params.min_hessian_in_leaf || hr < params.min_hessian_in_leaf) continue;
                const double gr = leaf.g_total - gl;
                const double gain = gl * gl / hl + gr * gr / hr - parent_score;
                if (gain > leaf.best.gain) {
                    leaf.best = SplitCandidate{gain, f, b, gl, hl, cl};
                }
            }
        }
    };

    for (int round = 0; round < params.rounds; ++round) {
        for (Index i = 0; i < n; ++i) {
            const double p = sigmoid(scores[static_cast<std::size_t>(i)]);
            const double y = static_cast<double>(train.labels()[static_cast<std::size_t>(i)]);
            grad[static_cast<std::size_t>(i)] = weights[static_cast<std::size_t>(i)] * (p - y);
            hess[static_cast<std::size_t>(i)] = weights[static_cast<std::size_t>(i)] * p * (1.0 - p);
        }

        std::vector<Node> tree(1);
        std::vector<LeafState> leaves(1);
        LeafState& root = leaves[0];
        root.rows.resize(static_cast<std::size_t>(n));
        std::iota(root.rows.begin(), root.rows.end(), Index{0});
        root.g_total = std::accumulate(grad.begin(), grad.end(), 0.0);
        root.h_total = std::accumulate(hess.begin(), hess.end(), 0.0);
        root.node = 0;
        build_histogram(root);
        find_best_split(root);

        int n_leaves = 1;
        while (n_leaves < params.max_leaves) {
            // Pick the splittable leaf with the largest gain; ties keep the
            // earliest-created leaf for determinism.
            int pick = -1;
            for (int l = 0; l < static_cast<int>(leaves.size()); ++l) {
                if (leaves[static_cast<std::size_t>(l)].best.feature < 0) continue;
                if (pick < 0 || leaves[static_cast<std::size_t>(l)].best.gain >
                                    leaves[static_cast<std::size_t>(pick)].best.gain)
                    pick = l;
            }
            if (pick < 0) break;

            LeafState parent = std::move(leaves[static_cast<std::size_t>(pick)]);
            leaves.erase(leaves.begin() + pick);
            const SplitCandidate& split = parent.best;

            const std::uint8_t* col =
                bins.data() + static_cast<std::size_t>(split.feature) * static_cast<std::size_t>(n);
            LeafState left, right;
            left.rows.reserve(static_cast<std::size_t>(split.n_left));
            right.rows.reserve(parent.rows.size() - static_cast<std::size_t>(split.n_left));
            for (Index r : parent.rows)
                (col[r] <= split.bin ? left.rows : right.rows).push_back(r);
            left.g_total = split.g_left;
            left.h_total = split.h_left;
            right.g_total = parent.g_total - split.g_left;
            right.h_total = parent.h_total - split.h_left;

            // Split threshold in feature space so prediction skips binning.
            const double threshold =
                mapper.upper[static_cast<std::size_t>(split.feature)][static_cast<std::size_t>(split.bin)];
            Node& parent_node = tree[static_cast<std::size_t>(parent.node)];
            parent_node.feature = split.feature;
            parent_node.threshold = threshold;
            parent_node.left = static_cast<int>(tree.size());
            parent_node.right = parent_node.left + 1;
            left.node = parent_node.left;
            right.node = parent_node.right;
            tree.emplace_back();
            tree.emplace_back();

            // Smaller child scans rows; the larger one reuses the parent
            // histogram by subtraction.
            if (left.rows.size() <= right.rows.size()) {
                build_histogram(left);
                right.hist = std::move(parent.hist);
                right.hist.subtract(left.hist);
            } else {
                build_histogram(right);
                left.hist = std::move(parent.hist);
                left.hist.subtract(right.hist);
            }
            find_best_split(left);
            find_best_split(right);
            leaves.push_back(std::move(left));
            leaves.push_back(std::move(right));
            ++n_leaves;
        }

        for (const LeafState& leaf : leaves) {
            const double denom = std::max(leaf.h_total, 1e-12);
            const double value = -params.learning_rate * leaf.g_total / denom;
            tree[static_cast<std::size_t>(leaf.node)].value = value;
            for (Index r : leaf.rows) scores[static_cast<std::size_t>(r)] += value;
        }
        model.trees_.push_back(std::move(tree));
    }
    return model;
}

Eigen::VectorXd GbdtModel::raw_scores(const MixedDataset& ds) const {
    const MatrixRd x = encode(ds);
    Eigen::VectorXd out = Eigen::VectorXd::Constant(ds.rows(), base_score_);
    for (const auto& tree : trees_) {
        for (Index i = 0; i < ds.rows(); ++i) {
            int node = 0;
            while (tree[static_cast<std::size_t>(node)].feature >= 0) {
                const Node& nd = tree[static_cast<std::size_t>(node)];
                node = x(i, nd.feature) <= nd.threshold ? nd.left : nd.right;
            }
            out[i] += tree[static_cast<std::size_t>(node)].value;
        }
    }
    return out;
}

Eigen::VectorXd GbdtModel::predict_proba(const MixedDataset& ds) const {
    Eigen::VectorXd scores = raw_scores(ds);
    for (Index i = 0; i < scores.size(); ++i) scores[i] = sigmoid(scores[i]);
    return scores;
}

}  // namespace mgsgrf
