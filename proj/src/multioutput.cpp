#include "mgsgrf/multioutput.hpp"

#include <map>
#include <stdexcept>

#include "mgsgrf/distance.hpp"
#include "mgsgrf/samplers.hpp"

namespace mgsgrf {

void KnnMultiOutput::fit(const MatrixRd& cont, const MatrixRi& cat, const std::vector<int>& cardinalities) {
    if (cont.rows() < k_)
        throw std::invalid_argument("knn classifier: fewer training rows than k");
    cont_ = cont;
    cat_ = cat;
    cardinalities_ = cardinalities;
}

Eigen::RowVectorXi KnnMultiOutput::predict(std::span<const double> x) const {
    const MatrixRi no_cat(cont_.rows(), 0);
    const auto nn = knn_of_point(cont_, no_cat, L2Metric{}, PointView{x, {}}, k_);
    Eigen::RowVectorXi out(cat_.cols());
    for (int j = 0; j < cat_.cols(); ++j)
        out[j] = categorical_vote(cat_, nn, j, cardinalities_[static_cast<std::size_t>(j)]);
    return out;
}

void GrfMultiOutput::fit(const MatrixRd& cont, const MatrixRi& cat, const std::vector<int>& cardinalities) {
    Rng rng(seed_);
    forest_ = std::make_unique<GrfForest>(GrfForest::fit(cont, cat, cardinalities, cfg_, rng));
}

Eigen::RowVectorXi GrfMultiOutput::predict(std::span<const double> x) const {
    if (!forest_) throw std::logic_error("grf classifier: predict before fit");
    const Eigen::VectorXd w = forest_->weights(x);
    // Accumulate weight per distinct categorical vector; the map order makes
    // ties resolve to the lexicographically smallest vector.
    std::map<std::vector<int>, double> mass;
    const auto& cat = forest_->training_categorical();
    for (Index i = 0; i < cat.rows(); ++i) {
        if (w[i] == 0.0) continue;
        std::vector<int> key(cat.cols());
        for (Index j = 0; j < cat.cols(); ++j) key[static_cast<std::size_t>(j)] = cat(i, j);
        mass[key] += w[i];
    }
    const std::vector<int>* best = nullptr;
    double best_mass = -1.0;
    for (const auto& [combo, m] : mass) {
        if (m > best_mass) {
            best_mass = m;
            best = &combo;
        }
    }
    Eigen::RowVectorXi out(cat.cols());
    for (Index j = 0; j < cat.cols(); ++j) out[j] = (*best)[static_cast<std::size_t>(j)];
    return out;
}

}  // namespace mgsgrf
