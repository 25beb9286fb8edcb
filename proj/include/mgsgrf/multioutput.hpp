#pragma once

#include <functional>
#include <memory>
#include <span>

#include "mgsgrf/grf.hpp"
#include "mgsgrf/types.hpp"

namespace mgsgrf {

/// Predicts a whole categorical vector from continuous features. Used as the
/// categorical generator of MGS-kNN and as the subject of the association
/// diagnostic.
class MultiOutputModel {
public:
    virtual ~MultiOutputModel() = default;
    virtual void fit(const MatrixRd& cont, const MatrixRi& cat, const std::vector<int>& cardinalities) = 0;
    virtual Eigen::RowVectorXi predict(std::span<const double> x) const = 0;
};

using MultiOutputFactory = std::function<std::unique_ptr<MultiOutputModel>()>;

/// k nearest neighbors under L2 with a per-column majority vote (ties to the
/// smallest code). k=1 copies the full vector of the single nearest row.
class KnnMultiOutput final : public MultiOutputModel {
public:
    explicit KnnMultiOutput(int k) : k_(k) {}
    void fit(const MatrixRd& cont, const MatrixRi& cat, const std::vector<int>& cardinalities) override;
    Eigen::RowVectorXi predict(std::span<const double> x) const override;

private:
    int k_;
    MatrixRd cont_;
    MatrixRi cat_;
    std::vector<int> cardinalities_;
};

/// Forest-weighted prediction: the categorical vector whose accumulated
/// leaf-co-occurrence weight is largest (ties to the lexicographically
/// smallest vector). Deterministic counterpart of drawing from the weights.
class GrfMultiOutput final : public MultiOutputModel {
public:
    GrfMultiOutput(GrfConfig cfg, std::uint64_t seed) : cfg_(cfg), seed_(seed) {}
    void fit(const MatrixRd& cont, const MatrixRi& cat, const std::vector<int>& cardinalities) override;
    Eigen::RowVectorXi predict(std::span<const double> x) const override;

    const GrfForest& forest() const { return *forest_; }

private:
    GrfConfig cfg_;
    std::uint64_t seed_;
    std::unique_ptr<GrfForest> forest_;
};

}  // namespace mgsgrf
