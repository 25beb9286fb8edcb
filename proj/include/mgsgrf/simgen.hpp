#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "mgsgrf/dataset.hpp"
#include "mgsgrf/rng.hpp"

namespace mgsgrf {

/// Generator parameters for the coherence benchmark: d standard-normal
/// continuous features; a pair of categorical features whose joint combo is
/// softmax-driven by the first three continuous values; a Bernoulli label
/// whose log-odds add a per-combo offset. Only `coherent_combos.size()` of
/// the m^2 combos carry the high offset, so the minority class concentrates
/// on them.
struct CoherenceSimParams {
    int n_samples = 5000;
    int d = 9;
    int m = 4;                                   // modalities per categorical column
    std::vector<std::array<double, 3>> theta;    // per combo, size m*m
    std::array<double, 3> alpha{};
    std::vector<double> gamma;                   // per combo, size m*m
    std::vector<int> coherent_combos;            // the m designated combo codes
    std::uint64_t seed = 0;                      // dataset draw stream, kept for replay

    int combos() const { return m * m; }
};

/// Generator parameters for the association benchmark: the three informative
/// features come from a 3-component Gaussian mixture with latent W; d-3 noise
/// features are independent; one categorical feature with 3 modalities is
/// softmax-driven by the informative features and W; the label log-odds add
/// per-component and per-modality offsets.
struct AssociationSimParams {
    int n_samples = 5000;
    int d = 5;  // total continuous features, >= 4
    std::array<double, 3> mixture_weights{0.45, 0.45, 0.10};
    std::array<std::array<double, 3>, 3> mu{};       // per component
    std::array<std::array<double, 9>, 3> sigma{};    // per component, row-major 3x3
    double noise_scale = 4.0;                        // variance of each noise feature
    std::array<std::array<double, 3>, 3> zeta{};     // per modality: weight on informative features
    std::array<std::array<double, 3>, 3> chi{};      // [component][modality] offsets
    std::array<double, 3> beta{};
    std::array<double, 3> eta{};                     // per component label offset
    std::array<double, 3> phi{};                     // per modality label offset
    std::uint64_t seed = 0;
};

MixedDataset gen_coherence(const CoherenceSimParams& params, Rng& rng);

struct AssociationSample {
    MixedDataset data;
    std::vector<int> latent_component;  // W per row; oracle-only side channel
};

AssociationSample gen_association(const AssociationSimParams& params, Rng& rng);

/// Exact argmax_c P(Z=c | X) computed from the generator: mixture posterior
/// over the latent component times the softmax of each component. Ties go to
/// the smallest modality code.
class AssociationBayesOracle {
public:
    explicit AssociationBayesOracle(const AssociationSimParams& params);

    /// x may be the full continuous row; only the first three entries matter.
    int predict(std::span<const double> x) const;
    std::array<double, 3> modality_posterior(std::span<const double> x) const;
    std::array<double, 3> component_posterior(std::span<const double> x) const;

private:
    AssociationSimParams params_;
    std::array<Eigen::Matrix3d, 3> precision_;
    std::array<double, 3> log_norm_;  // log(pi_w) - 0.5 log det(2 pi Sigma_w)
};

/// Deterministic parameter recipes. Softmax weights and label coefficients
/// are drawn from the seeded stream; the shared label offset is calibrated by
/// bisection against a 1e5-row pilot estimate of the expected minority
/// fraction.
CoherenceSimParams default_coherence_params(int config_index, std::uint64_t seed, int m = 4, int d = 9);
AssociationSimParams default_association_params(int dimension, std::uint64_t seed);

/// Expected minority fraction under the parameters, estimated on a pilot draw
/// (used by the calibration and exposed for validation).
double expected_minority_fraction(const CoherenceSimParams& params, int pilot_rows, Rng& rng);
double expected_minority_fraction(const AssociationSimParams& params, int pilot_rows, Rng& rng);

/// Schemas matching the generated datasets (x1..xd, z1/z2 or z, y).
Schema coherence_schema(const CoherenceSimParams& params);
Schema association_schema(const AssociationSimParams& params);

/// Params files for exact replay.
void save_params(const std::filesystem::path& path, const CoherenceSimParams& params);
void save_params(const std::filesystem::path& path, const AssociationSimParams& params);
bool load_coherence_params(const std::filesystem::path& path, CoherenceSimParams& out);
bool load_association_params(const std::filesystem::path& path, AssociationSimParams& out);

}  // namespace mgsgrf
