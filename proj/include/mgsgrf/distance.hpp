#pragma once

#include <span>
#include <variant>
#include <vector>

#include "mgsgrf/dataset.hpp"
#include "mgsgrf/types.hpp"

namespace mgsgrf {

/// One observation seen by a metric: contiguous views of its continuous and
/// categorical blocks.
struct PointView {
    std::span<const double> cont;
    std::span<const int> cat;
};

inline PointView row_view(const MatrixRd& cont, const MatrixRi& cat, Index i) {
    return PointView{std::span<const double>(cont.row(i).data(), static_cast<std::size_t>(cont.cols())),
                     std::span<const int>(cat.row(i).data(), static_cast<std::size_t>(cat.cols()))};
}

/// Per-column table of p(Y=0 | X_j = u) estimated by raw frequencies over the
/// full dataset (both classes). Backs the value-difference metric
/// delta(u,v) = 2 |p(u) - p(v)|. Queries are restricted to modalities seen at
/// fit time; an unknown modality is a caller bug and throws.
class VdmTable {
public:
    static VdmTable fit(const MixedDataset& ds);

    double p0(int column, int code) const;
    double delta(int column, int u, int v) const;

    /// Sum of per-column deltas between two categorical vectors.
    double distance(std::span<const int> u, std::span<const int> v) const;

private:
    std::vector<std::vector<double>> p0_;       // [column][code]
    std::vector<std::vector<bool>> observed_;   // modality seen in the fitted data
};

struct L2Metric {};
struct NcMetric {
    double c = 0.0;  // per-mismatch penalty scale
};
struct VdmMetric {
    const VdmTable* table = nullptr;
};

/// L2 over continuous blocks, VDM over categorical blocks, or the mixed
/// metric sqrt(sum (x'_j - x_j)^2 + c^2 * #categorical mismatches).
using DistanceKind = std::variant<L2Metric, NcMetric, VdmMetric>;

double distance(const DistanceKind& metric, const PointView& a, const PointView& b);

/// Median over continuous columns of the minority-class population standard
/// deviation. Lower median for even column counts.
double nc_scale(const MixedDataset& ds);

struct NeighborQuery {
    int k = 5;
    bool include_self = false;
};

/// Exact k nearest neighbors of pool member `query` within the pool described
/// by (cont, cat). Ordered by (distance, index); with include_self the query
/// itself is always neighbor 1. Throws when the pool cannot supply k results.
std::vector<Index> knn_of_member(const MatrixRd& cont, const MatrixRi& cat,
                                 const DistanceKind& metric, Index query, const NeighborQuery& q);

/// Exact k nearest pool members to an arbitrary point.
std::vector<Index> knn_of_point(const MatrixRd& cont, const MatrixRi& cat,
                                const DistanceKind& metric, const PointView& point, int k);

}  // namespace mgsgrf
