#include "mgsgrf/distance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace mgsgrf {

VdmTable VdmTable::fit(const MixedDataset& ds) {
    VdmTable t;
    const int p = ds.p();
    t.p0_.resize(static_cast<std::size_t>(p));
    t.observed_.resize(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) {
        const int card = ds.cardinalities()[static_cast<std::size_t>(j)];
        std::vector<std::int64_t> total(static_cast<std::size_t>(card), 0);
        std::vector<std::int64_t> zeros(static_cast<std::size_t>(card), 0);
        for (Index i = 0; i < ds.rows(); ++i) {
            const auto code = static_cast<std::size_t>(ds.categorical()(i, j));
            ++total[code];
            if (ds.labels()[static_cast<std::size_t>(i)] == 0) ++zeros[code];
        }
        auto& probs = t.p0_[static_cast<std::size_t>(j)];
        auto& seen = t.observed_[static_cast<std::size_t>(j)];
        probs.assign(static_cast<std::size_t>(card), 0.0);
        seen.assign(static_cast<std::size_t>(card), false);
        for (int u = 0; u < card; ++u) {
            if (total[static_cast<std::size_t>(u)] > 0) {
                probs[static_cast<std::size_t>(u)] =
                    static_cast<double>(zeros[static_cast<std::size_t>(u)]) /
                    static_cast<double>(total[static_cast<std::size_t>(u)]);
                seen[static_cast<std::size_t>(u)] = true;
            }
        }
    }
    return t;
}

double VdmTable::p0(int column, int code) const {
    const auto& seen = observed_.at(static_cast<std::size_t>(column));
    if (code < 0 || code >= static_cast<int>(seen.size()) || !seen[static_cast<std::size_t>(code)])
        throw std::logic_error(
            fmt::format("vdm: modality {} of column {} was never observed at fit time", code, column));
    return p0_[static_cast<std::size_t>(column)][static_cast<std::size_t>(code)];
}

double VdmTable::delta(int column, int u, int v) const {
    return 2.0 * std::abs(p0(column, u) - p0(column, v));
}

double VdmTable::distance(std::span<const int> u, std::span<const int> v) const {
    if (u.size() != v.size() || u.size() != p0_.size())
        throw std::invalid_argument("vdm: categorical vector length mismatch");
    double sum = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j)
        sum += delta(static_cast<int>(j), u[j], v[j]);
    return sum;
}

namespace {

double l2_squared(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double diff = a[j] - b[j];
        s += diff * diff;
    }
    return s;
}

int mismatches(std::span<const int> a, std::span<const int> b) {
    int m = 0;
    for (std::size_t j = 0; j < a.size(); ++j) m += (a[j] != b[j]);
    return m;
}

}  // namespace

double distance(const DistanceKind& metric, const PointView& a, const PointView& b) {
    if (a.cont.size() != b.cont.size() || a.cat.size() != b.cat.size())
        throw std::invalid_argument("distance: block shape mismatch");
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, L2Metric>) {
                return std::sqrt(l2_squared(a.cont, b.cont));
            } else if constexpr (std::is_same_v<T, NcMetric>) {
                return std::sqrt(l2_squared(a.cont, b.cont) + m.c * m.c * mismatches(a.cat, b.cat));
            } else {
                return m.table->distance(a.cat, b.cat);
            }
        },
        metric);
}

double nc_scale(const MixedDataset& ds) {
    const auto minority = ds.minority_indices();
    if (minority.empty()) throw std::invalid_argument("nc_scale: no minority rows");
    const int d = ds.d();
    if (d == 0) return 0.0;
    std::vector<double> sds(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        double mean = 0.0;
        for (Index i : minority) mean += ds.continuous()(i, j);
        mean /= static_cast<double>(minority.size());
        double var = 0.0;
        for (Index i : minority) {
            const double diff = ds.continuous()(i, j) - mean;
            var += diff * diff;
        }
        var /= static_cast<double>(minority.size());
        sds[static_cast<std::size_t>(j)] = std::sqrt(var);
    }
    // Lower median: element at index (d-1)/2 of the sorted values.
    std::sort(sds.begin(), sds.end());
    return sds[static_cast<std::size_t>((d - 1) / 2)];
}

namespace {

std::vector<Index> select_k(std::vector<std::pair<double, Index>>& cand, int k) {
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
    std::vector<Index> out(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) out[static_cast<std::size_t>(i)] = cand[static_cast<std::size_t>(i)].second;
    return out;
}

}  // namespace

std::vector<Index> knn_of_member(const MatrixRd& cont, const MatrixRi& cat,
                                 const DistanceKind& metric, Index query, const NeighborQuery& q) {
    const Index n = cont.rows();
    if (q.k < 1) throw std::invalid_argument("knn: k must be positive");
    const Index pool = q.include_self ? n : n - 1;
    if (pool < q.k)
        throw std::invalid_argument(
            fmt::format("knn: pool of {} candidates cannot supply k={}; lower k", pool, q.k));

    const PointView qv = row_view(cont, cat, query);
    std::vector<std::pair<double, Index>> cand;
    cand.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        if (i == query) continue;
        cand.emplace_back(distance(metric, qv, row_view(cont, cat, i)), i);
    }

    if (!q.include_self) return select_k(cand, q.k);

    // The query is pinned as neighbor 1 even when other points sit at distance 0.
    std::vector<Index> out{query};
    if (q.k > 1) {
        auto rest = select_k(cand, q.k - 1);
        out.insert(out.end(), rest.begin(), rest.end());
    }
    return out;
}

std::vector<Index> knn_of_point(const MatrixRd& cont, const MatrixRi& cat,
                                const DistanceKind& metric, const PointView& point, int k) {
    const Index n = cont.rows();
    if (k < 1) throw std::invalid_argument("knn: k must be positive");
    if (n < k)
        throw std::invalid_argument(fmt::format("knn: pool of {} candidates cannot supply k={}; lower k", n, k));
    std::vector<std::pair<double, Index>> cand;
    cand.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i)
        cand.emplace_back(distance(metric, point, row_view(cont, cat, i)), i);
    return select_k(cand, k);
}

}  // namespace mgsgrf
