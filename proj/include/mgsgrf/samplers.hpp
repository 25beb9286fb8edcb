#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mgsgrf/dataset.hpp"
#include "mgsgrf/distance.hpp"
#include "mgsgrf/grf.hpp"
#include "mgsgrf/rng.hpp"

namespace mgsgrf {

enum class SamplerKind {
    None,
    ClassWeight,
    RandomOversample,
    RandomUndersample,
    Smote,
    SmoteN,
    SmoteNc,
    Mgs,
    MgsNc,
    MgsKnn,
    MgsGrf,
};

SamplerKind sampler_kind_from_string(const std::string& name);
std::string sampler_kind_name(SamplerKind kind);
bool is_mgs_family(SamplerKind kind);

struct SamplerConfig {
    SamplerKind kind = SamplerKind::None;
    // Neighborhood size; 0 picks the per-family default (5 for the SMOTE
    // family, d+1 for the MGS family).
    int k_neighbors = 0;
    // k of the multi-output kNN predictor behind MGS-kNN (1 copies vectors).
    int knn_predictor_k = 5;
    GrfConfig grf;
};

/// Local Gaussian fitted around one minority sample: neighbor mean, 1/K
/// empirical covariance over the K nearest minority rows (the sample itself
/// included), and a Cholesky factor of the ridge-stabilized covariance.
struct LocalGaussian {
    Index center = -1;                 // position within the minority block
    std::vector<Index> neighborhood;   // positions within the minority block
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma;
    Eigen::MatrixXd factor;            // lower-triangular, factor*factor^T = sigma + ridge*I
    double ridge = 0.0;
};

/// One synthetic row's origin: which minority sample seeded it, which
/// neighborhood was used, and which partner/draw produced the final row.
struct SyntheticProvenance {
    Index center = -1;
    std::vector<Index> neighbors;
    Index pick = -1;
    double interpolation = std::numeric_limits<double>::quiet_NaN();
};

struct ResampleResult {
    MixedDataset data;
    std::vector<int> synthetic_mask;       // 1 for generated rows
    std::vector<double> sample_weights;    // ClassWeight only, else empty
    std::vector<SyntheticProvenance> provenance;

    Index synthetic_count() const;
    /// Categorical block of the synthetic rows only.
    MatrixRi synthetic_categorical() const;
};

/// Linear interpolation center + w * (neighbor - center), w in [0,1].
Eigen::RowVectorXd smote_interpolate(const Eigen::RowVectorXd& center,
                                     const Eigen::RowVectorXd& neighbor, double w);

/// Most frequent code of `column` among the given rows; ties break to the
/// smallest code.
int categorical_vote(const MatrixRi& cat, std::span<const Index> rows, int column, int cardinality);

/// Fits one local Gaussian per minority row over the L2 neighborhoods of the
/// minority continuous block. k = 0 uses d+1.
std::vector<LocalGaussian> fit_mgs(const MatrixRd& minority_cont, int k = 0);

/// Local Gaussian over an explicit neighborhood (first entry treated as the
/// center).
LocalGaussian fit_local_gaussian(const MatrixRd& cont, std::vector<Index> neighborhood);

struct MgsDraw {
    Eigen::RowVectorXd point;
    std::size_t component;  // which local Gaussian was picked
};

/// Equal-weight mixture draw: uniform component, then mu + factor * eps.
MgsDraw mgs_draw(const std::vector<LocalGaussian>& gaussians, Rng& rng);

/// Balanced class weights (w0, w1) with w1 = N/(2n), w0 = N/(2(N-n)).
std::pair<double, double> class_weights(const MixedDataset& ds);

/// Applies a rebalancing strategy. Original rows come first and bit-exact;
/// synthetic minority rows (label 1) follow. Deterministic given (config, ds,
/// rng seed).
ResampleResult resample(const SamplerConfig& config, const MixedDataset& ds, Rng& rng);

}  // namespace mgsgrf
