#include "mgsgrf/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

namespace mgsgrf {

namespace {

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

// Stable softmax into `probs` (sized already).
void softmax(std::span<double> logits) {
    const double peak = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (double& l : logits) {
        l = std::exp(l - peak);
        total += l;
    }
    for (double& l : logits) l /= total;
}

double dot3(const std::array<double, 3>& a, std::span<const double> x) {
    return a[0] * x[0] + a[1] * x[1] + a[2] * x[2];
}

void scale_to_norm(std::array<double, 3>& v, double norm) {
    const double len = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (len == 0.0) {
        v = {norm, 0.0, 0.0};
        return;
    }
    for (double& e : v) e *= norm / len;
}

Eigen::Matrix3d to_matrix(const std::array<double, 9>& rowmajor) {
    Eigen::Matrix3d m;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = rowmajor[static_cast<std::size_t>(3 * r + c)];
    return m;
}

void validate(const CoherenceSimParams& p) {
    if (p.n_samples < 1 || p.d < 3 || p.m < 2)
        throw std::invalid_argument("coherence params: need n>=1, d>=3, m>=2");
    if (static_cast<int>(p.theta.size()) != p.combos() || static_cast<int>(p.gamma.size()) != p.combos())
        throw std::invalid_argument("coherence params: theta/gamma must cover all m^2 combos");
}

void validate(const AssociationSimParams& p) {
    if (p.n_samples < 1 || p.d < 4)
        throw std::invalid_argument("association params: need n>=1 and d>=4");
    double total = 0.0;
    for (double w : p.mixture_weights) {
        if (w < 0.0) throw std::invalid_argument("association params: negative mixture weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("association params: mixture weights must sum to 1");
    if (!(p.noise_scale > 0.0))
        throw std::invalid_argument("association params: noise scale must be positive");
}

}  // namespace

MixedDataset gen_coherence(const CoherenceSimParams& params, Rng& rng) {
    validate(params);
    const int n = params.n_samples;
    const int d = params.d;
    const int combos = params.combos();

    MatrixRd cont(n, d);
    MatrixRi cat(n, 2);
    std::vector<int> labels(static_cast<std::size_t>(n));
    std::vector<double> probs(static_cast<std::size_t>(combos));

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) cont(i, j) = rng.normal();
        const std::span<const double> x3{cont.row(i).data(), 3};
        for (int c = 0; c < combos; ++c)
            probs[static_cast<std::size_t>(c)] = -dot3(params.theta[static_cast<std::size_t>(c)], x3);
        softmax(probs);
        const int z = static_cast<int>(rng.pick_weighted(probs));
        cat(i, 0) = z / params.m;
        cat(i, 1) = z % params.m;
        const double p1 = sigmoid(dot3(params.alpha, x3) + params.gamma[static_cast<std::size_t>(z)]);
        labels[static_cast<std::size_t>(i)] = rng.uniform() < p1 ? 1 : 0;
    }
    return MixedDataset(std::move(cont), std::move(cat), std::move(labels), {params.m, params.m});
}

AssociationSample gen_association(const AssociationSimParams& params, Rng& rng) {
    validate(params);
    const int n = params.n_samples;
    const int d = params.d;

    std::array<Eigen::Matrix3d, 3> chol;
    for (int w = 0; w < 3; ++w) {
        Eigen::LLT<Eigen::Matrix3d> llt(to_matrix(params.sigma[static_cast<std::size_t>(w)]));
        if (llt.info() != Eigen::Success)
            throw std::invalid_argument("association params: component covariance not positive definite");
        chol[static_cast<std::size_t>(w)] = llt.matrixL();
    }
    const double noise_sd = std::sqrt(params.noise_scale);

    MatrixRd cont(n, d);
    MatrixRi cat(n, 1);
    std::vector<int> labels(static_cast<std::size_t>(n));
    std::vector<int> latent(static_cast<std::size_t>(n));
    std::vector<double> probs(3);

    for (int i = 0; i < n; ++i) {
        const int w = static_cast<int>(rng.pick_weighted(params.mixture_weights));
        latent[static_cast<std::size_t>(i)] = w;
        Eigen::Vector3d eps;
        for (int j = 0; j < 3; ++j) eps[j] = rng.normal();
        const Eigen::Vector3d x3 = Eigen::Vector3d(params.mu[static_cast<std::size_t>(w)].data()) +
                                   chol[static_cast<std::size_t>(w)] * eps;
        for (int j = 0; j < 3; ++j) cont(i, j) = x3[j];
        // Noise block: means recycle the second component's mean entries.
        for (int j = 3; j < d; ++j)
            cont(i, j) = params.mu[1][static_cast<std::size_t>((j - 3) % 3)] + noise_sd * rng.normal();

        const std::span<const double> xv{cont.row(i).data(), 3};
        for (int c = 0; c < 3; ++c)
            probs[static_cast<std::size_t>(c)] = -dot3(params.zeta[static_cast<std::size_t>(c)], xv) +
                                                 params.chi[static_cast<std::size_t>(w)][static_cast<std::size_t>(c)];
        softmax(probs);
        const int z = static_cast<int>(rng.pick_weighted(probs));
        cat(i, 0) = z;
        const double p1 = sigmoid(dot3(params.beta, xv) + params.eta[static_cast<std::size_t>(w)] +
                                  params.phi[static_cast<std::size_t>(z)]);
        labels[static_cast<std::size_t>(i)] = rng.uniform() < p1 ? 1 : 0;
    }
    return AssociationSample{
        MixedDataset(std::move(cont), std::move(cat), std::move(labels), {3}),
        std::move(latent)};
}

AssociationBayesOracle::AssociationBayesOracle(const AssociationSimParams& params) : params_(params) {
    validate(params_);
    for (int w = 0; w < 3; ++w) {
        const Eigen::Matrix3d sigma = to_matrix(params_.sigma[static_cast<std::size_t>(w)]);
        precision_[static_cast<std::size_t>(w)] = sigma.inverse();
        const double logdet = std::log(sigma.determinant());
        const double logpi = params_.mixture_weights[static_cast<std::size_t>(w)] > 0.0
                                 ? std::log(params_.mixture_weights[static_cast<std::size_t>(w)])
                                 : -std::numeric_limits<double>::infinity();
        log_norm_[static_cast<std::size_t>(w)] = logpi - 0.5 * (3.0 * std::log(2.0 * M_PI) + logdet);
    }
}

std::array<double, 3> AssociationBayesOracle::component_posterior(std::span<const double> x) const {
    std::array<double, 3> logpost;
    for (int w = 0; w < 3; ++w) {
        const Eigen::Vector3d diff =
            Eigen::Vector3d(x[0], x[1], x[2]) - Eigen::Vector3d(params_.mu[static_cast<std::size_t>(w)].data());
        logpost[static_cast<std::size_t>(w)] =
            log_norm_[static_cast<std::size_t>(w)] -
            0.5 * diff.dot(precision_[static_cast<std::size_t>(w)] * diff);
    }
    softmax(logpost);
    return logpost;
}

std::array<double, 3> AssociationBayesOracle::modality_posterior(std::span<const double> x) const {
    const auto post_w = component_posterior(x);
    std::array<double, 3> out{0.0, 0.0, 0.0};
    std::array<double, 3> probs;
    for (int w = 0; w < 3; ++w) {
        for (int c = 0; c < 3; ++c)
            probs[static_cast<std::size_t>(c)] =
                -dot3(params_.zeta[static_cast<std::size_t>(c)], x) +
                params_.chi[static_cast<std::size_t>(w)][static_cast<std::size_t>(c)];
        softmax(probs);
        for (int c = 0; c < 3; ++c)
            out[static_cast<std::size_t>(c)] += post_w[static_cast<std::size_t>(w)] * probs[static_cast<std::size_t>(c)];
    }
    return out;
}

int AssociationBayesOracle::predict(std::span<const double> x) const {
    const auto post = modality_posterior(x);
    int best = 0;
    for (int c = 1; c < 3; ++c)
        if (post[static_cast<std::size_t>(c)] > post[static_cast<std::size_t>(best)]) best = c;
    return best;
}

double expected_minority_fraction(const CoherenceSimParams& params, int pilot_rows, Rng& rng) {
    validate(params);
    const int combos = params.combos();
    std::vector<double> probs(static_cast<std::size_t>(combos));
    double total = 0.0;
    std::array<double, 3> x3;
    for (int i = 0; i < pilot_rows; ++i) {
        for (double& v : x3) v = rng.normal();
        for (int c = 0; c < combos; ++c)
            probs[static_cast<std::size_t>(c)] = -dot3(params.theta[static_cast<std::size_t>(c)], x3);
        softmax(probs);
        const double a = dot3(params.alpha, x3);
        double row = 0.0;
        for (int c = 0; c < combos; ++c)
            row += probs[static_cast<std::size_t>(c)] * sigmoid(a + params.gamma[static_cast<std::size_t>(c)]);
        total += row;
    }
    return total / static_cast<double>(pilot_rows);
}

double expected_minority_fraction(const AssociationSimParams& params, int pilot_rows, Rng& rng) {
    validate(params);
    std::array<Eigen::Matrix3d, 3> chol;
    for (int w = 0; w < 3; ++w) {
        Eigen::LLT<Eigen::Matrix3d> llt(to_matrix(params.sigma[static_cast<std::size_t>(w)]));
        if (llt.info() != Eigen::Success)
            throw std::invalid_argument("association params: component covariance not positive definite");
        chol[static_cast<std::size_t>(w)] = llt.matrixL();
    }
    std::array<double, 3> probs;
    double total = 0.0;
    for (int i = 0; i < pilot_rows; ++i) {
        const int w = static_cast<int>(rng.pick_weighted(params.mixture_weights));
        Eigen::Vector3d eps;
        for (int j = 0; j < 3; ++j) eps[j] = rng.normal();
        const Eigen::Vector3d x3 = Eigen::Vector3d(params.mu[static_cast<std::size_t>(w)].data()) +
                                   chol[static_cast<std::size_t>(w)] * eps;
        const std::array<double, 3> xv{x3[0], x3[1], x3[2]};
        for (int c = 0; c < 3; ++c)
            probs[static_cast<std::size_t>(c)] = -dot3(params.zeta[static_cast<std::size_t>(c)], xv) +
                                                 params.chi[static_cast<std::size_t>(w)][static_cast<std::size_t>(c)];
        softmax(probs);
        const double base = dot3(params.beta, xv) + params.eta[static_cast<std::size_t>(w)];
        double row = 0.0;
        for (int c = 0; c < 3; ++c)
            row += probs[static_cast<std::size_t>(c)] * sigmoid(base + params.phi[static_cast<std::size_t>(c)]);
        total += row;
    }
    return total / static_cast<double>(pilot_rows);
}

namespace {

constexpr int kPilotRows = 100000;

// Finds the offset b solving fraction(b) = target; fraction must be
// increasing in b over [lo, hi].
template <class FractionFn>
double bisect_offset(FractionFn&& fraction, double target, double lo, double hi) {
    double f_lo = fraction(lo);
    double f_hi = fraction(hi);
    if (f_lo > target || f_hi < target)
        throw std::runtime_error(
            fmt::format("parameter calibration cannot reach minority fraction {:.4f}; "
                        "achievable range is [{:.5f}, {:.5f}]",
                        target, f_lo, f_hi));
    for (int iter = 0; iter < 100 && hi - lo > 1e-12; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (fraction(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

CoherenceSimParams default_coherence_params(int config_index, std::uint64_t seed, int m, int d) {
    if (config_index < 1)
        throw std::invalid_argument("default_coherence_params: config index starts at 1");
    if (m < 2 || d < 3)
        throw std::invalid_argument("default_coherence_params: need m>=2 and d>=3");
    CoherenceSimParams p;
    p.m = m;
    p.d = d;
    Rng rng(derive_seed({seed, static_cast<std::uint64_t>(config_index), 0xC0F5ULL}));

    const int combos = p.combos();
    p.theta.resize(static_cast<std::size_t>(combos));
    for (auto& theta : p.theta)
        for (double& v : theta) v = rng.normal();
    for (double& v : p.alpha) v = rng.normal();
    scale_to_norm(p.alpha, 2.0);

    auto picked = rng.sample_without_replacement(static_cast<std::size_t>(combos),
                                                 static_cast<std::size_t>(p.m));
    p.coherent_combos.assign(picked.begin(), picked.end());
    std::sort(p.coherent_combos.begin(), p.coherent_combos.end());

    // Pilot statistics reused across bisection steps: combo mass on the
    // designated ("coherent") combos and the informative projection.
    const std::uint64_t pilot_seed = derive_seed({seed, static_cast<std::uint64_t>(config_index), 0x9107ULL});
    std::vector<double> coherent_mass(kPilotRows);
    std::vector<double> projection(kPilotRows);
    {
        Rng pilot(pilot_seed);
        std::vector<double> probs(static_cast<std::size_t>(combos));
        std::vector<bool> is_coherent(static_cast<std::size_t>(combos), false);
        for (int c : p.coherent_combos) is_coherent[static_cast<std::size_t>(c)] = true;
        std::array<double, 3> x3;
        for (int i = 0; i < kPilotRows; ++i) {
            for (double& v : x3) v = pilot.normal();
            for (int c = 0; c < combos; ++c)
                probs[static_cast<std::size_t>(c)] = -dot3(p.theta[static_cast<std::size_t>(c)], x3);
            softmax(probs);
            double mass = 0.0;
            for (int c = 0; c < combos; ++c)
                if (is_coherent[static_cast<std::size_t>(c)]) mass += probs[static_cast<std::size_t>(c)];
            coherent_mass[static_cast<std::size_t>(i)] = mass;
            projection[static_cast<std::size_t>(i)] = dot3(p.alpha, x3);
        }
    }

    constexpr double kSeparation = 6.0;  // half-gap between designated and other combos
    constexpr double kTargetFraction = 0.05;
    const double offset = bisect_offset(
        [&](double b) {
            double total = 0.0;
            for (int i = 0; i < kPilotRows; ++i) {
                const double a = projection[static_cast<std::size_t>(i)];
                const double mass = coherent_mass[static_cast<std::size_t>(i)];
                total += mass * sigmoid(a + b + kSeparation) + (1.0 - mass) * sigmoid(a + b - kSeparation);
            }
            return total / static_cast<double>(kPilotRows);
        },
        kTargetFraction, -40.0, 10.0);

    p.gamma.assign(static_cast<std::size_t>(combos), offset - kSeparation);
    for (int c : p.coherent_combos) p.gamma[static_cast<std::size_t>(c)] = offset + kSeparation;

    p.seed = derive_seed({seed, static_cast<std::uint64_t>(config_index), 0xDA7AULL});
    return p;
}

AssociationSimParams default_association_params(int dimension, std::uint64_t seed) {
    if (dimension < 4)
        throw std::invalid_argument("default_association_params: dimension must be at least 4");
    AssociationSimParams p;
    p.d = dimension;
    // The recipe ignores the dimension so every d shares one parameter set.
    Rng rng(derive_seed({seed, 0xA550ULL}));

    for (auto& mu : p.mu)
        for (double& v : mu) v = 3.0 * rng.normal();
    for (auto& sigma : p.sigma) {
        Eigen::Matrix3d a;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) a(r, c) = rng.normal();
        const Eigen::Matrix3d s = a * a.transpose() / 3.0 + 0.5 * Eigen::Matrix3d::Identity();
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) sigma[static_cast<std::size_t>(3 * r + c)] = s(r, c);
    }
    for (auto& zeta : p.zeta) {
        for (double& v : zeta) v = rng.normal();
        scale_to_norm(zeta, 1.0);
    }
    // Each mixture component pushes one designated modality.
    auto order = rng.sample_without_replacement(3, 3);
    for (int w = 0; w < 3; ++w)
        for (int c = 0; c < 3; ++c)
            p.chi[static_cast<std::size_t>(w)][static_cast<std::size_t>(c)] =
                order[static_cast<std::size_t>(w)] == static_cast<std::size_t>(c) ? 8.0 : 0.0;

    for (double& v : p.beta) v = rng.normal();
    scale_to_norm(p.beta, 2.0);
    for (double& v : p.eta) v = rng.normal();
    p.eta[2] += 2.0;  // the rare component is the minority-prone one
    for (double& v : p.phi) v = 1.5 * rng.normal();

    // Pilot rows for calibration of the shared label offset.
    const std::uint64_t pilot_seed = derive_seed({seed, 0x9107ULL});
    std::vector<std::array<double, 3>> pilot_probs(kPilotRows);
    std::vector<std::array<double, 3>> pilot_scores(kPilotRows);
    {
        Rng pilot(pilot_seed);
        std::array<Eigen::Matrix3d, 3> chol;
        for (int w = 0; w < 3; ++w)
            chol[static_cast<std::size_t>(w)] =
                Eigen::LLT<Eigen::Matrix3d>(to_matrix(p.sigma[static_cast<std::size_t>(w)])).matrixL();
        for (int i = 0; i < kPilotRows; ++i) {
            const int w = static_cast<int>(pilot.pick_weighted(p.mixture_weights));
            Eigen::Vector3d eps;
            for (int j = 0; j < 3; ++j) eps[j] = pilot.normal();
            const Eigen::Vector3d x3 = Eigen::Vector3d(p.mu[static_cast<std::size_t>(w)].data()) +
                                       chol[static_cast<std::size_t>(w)] * eps;
            const std::array<double, 3> xv{x3[0], x3[1], x3[2]};
            auto& probs = pilot_probs[static_cast<std::size_t>(i)];
            for (int c = 0; c < 3; ++c)
                probs[static_cast<std::size_t>(c)] =
                    -dot3(p.zeta[static_cast<std::size_t>(c)], xv) +
                    p.chi[static_cast<std::size_t>(w)][static_cast<std::size_t>(c)];
            softmax(probs);
            const double base = dot3(p.beta, xv) + p.eta[static_cast<std::size_t>(w)];
            for (int c = 0; c < 3; ++c)
                pilot_scores[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] =
                    base + p.phi[static_cast<std::size_t>(c)];
        }
    }

    constexpr double kTargetFraction = 0.075;
    const double offset = bisect_offset(
        [&](double b) {
            double total = 0.0;
            for (int i = 0; i < kPilotRows; ++i) {
                double row = 0.0;
                for (int c = 0; c < 3; ++c)
                    row += pilot_probs[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] *
                           sigmoid(pilot_scores[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] + b);
                total += row;
            }
            return total / static_cast<double>(kPilotRows);
        },
        kTargetFraction, -40.0, 20.0);
    for (double& v : p.eta) v += offset;

    p.seed = derive_seed({seed, static_cast<std::uint64_t>(dimension), 0xDA7AULL});
    return p;
}

Schema coherence_schema(const CoherenceSimParams& params) {
    std::vector<Schema::Column> cols;
    for (int j = 1; j <= params.d; ++j) cols.push_back({fmt::format("x{}", j), ColumnKind::Continuous});
    cols.push_back({"z1", ColumnKind::Categorical});
    cols.push_back({"z2", ColumnKind::Categorical});
    cols.push_back({"y", ColumnKind::Label});
    Schema schema(std::move(cols));
    for (int k = 0; k < 2; ++k)
        for (int code = 0; code < params.m; ++code) schema.encode(k, fmt::format("m{}", code));
    return schema;
}

Schema association_schema(const AssociationSimParams& params) {
    std::vector<Schema::Column> cols;
    for (int j = 1; j <= params.d; ++j) cols.push_back({fmt::format("x{}", j), ColumnKind::Continuous});
    cols.push_back({"z", ColumnKind::Categorical});
    cols.push_back({"y", ColumnKind::Label});
    Schema schema(std::move(cols));
    static const char* kModalities[3] = {"A", "B", "C"};
    for (const char* name : kModalities) schema.encode(0, name);
    return schema;
}

namespace {

nlohmann::json array3(const std::array<double, 3>& a) { return nlohmann::json{a[0], a[1], a[2]}; }

std::array<double, 3> to_array3(const nlohmann::json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

}  // namespace

void save_params(const std::filesystem::path& path, const CoherenceSimParams& p) {
    nlohmann::json j;
    j["protocol"] = "coherence";
    j["n_samples"] = p.n_samples;
    j["d"] = p.d;
    j["m"] = p.m;
    j["alpha"] = array3(p.alpha);
    j["theta"] = nlohmann::json::array();
    for (const auto& t : p.theta) j["theta"].push_back(array3(t));
    j["gamma"] = p.gamma;
    j["coherent_combos"] = p.coherent_combos;
    j["seed"] = p.seed;
    std::ofstream out(path);
    if (!out) throw std::runtime_error(fmt::format("params: cannot write '{}'", path.string()));
    out << j.dump(2) << '\n';
}

void save_params(const std::filesystem::path& path, const AssociationSimParams& p) {
    nlohmann::json j;
    j["protocol"] = "association";
    j["n_samples"] = p.n_samples;
    j["d"] = p.d;
    j["mixture_weights"] = array3(p.mixture_weights);
    j["mu"] = nlohmann::json::array();
    for (const auto& m : p.mu) j["mu"].push_back(array3(m));
    j["sigma"] = nlohmann::json::array();
    for (const auto& s : p.sigma) j["sigma"].push_back(std::vector<double>(s.begin(), s.end()));
    j["noise_scale"] = p.noise_scale;
    j["zeta"] = nlohmann::json::array();
    for (const auto& z : p.zeta) j["zeta"].push_back(array3(z));
    j["chi"] = nlohmann::json::array();
    for (const auto& c : p.chi) j["chi"].push_back(array3(c));
    j["beta"] = array3(p.beta);
    j["eta"] = array3(p.eta);
    j["phi"] = array3(p.phi);
    j["seed"] = p.seed;
    std::ofstream out(path);
    if (!out) throw std::runtime_error(fmt::format("params: cannot write '{}'", path.string()));
    out << j.dump(2) << '\n';
}

bool load_coherence_params(const std::filesystem::path& path, CoherenceSimParams& out) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(fmt::format("params: cannot open '{}'", path.string()));
    nlohmann::json j;
    in >> j;
    if (j.value("protocol", "") != "coherence") return false;
    out.n_samples = j.at("n_samples").get<int>();
    out.d = j.at("d").get<int>();
    out.m = j.at("m").get<int>();
    out.alpha = to_array3(j.at("alpha"));
    out.theta.clear();
    for (const auto& t : j.at("theta")) out.theta.push_back(to_array3(t));
    out.gamma = j.at("gamma").get<std::vector<double>>();
    out.coherent_combos = j.at("coherent_combos").get<std::vector<int>>();
    out.seed = j.at("seed").get<std::uint64_t>();
    return true;
}

bool load_association_params(const std::filesystem::path& path, AssociationSimParams& out) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(fmt::format("params: cannot open '{}'", path.string()));
    nlohmann::json j;
    in >> j;
    if (j.value("protocol", "") != "association") return false;
    out.n_samples = j.at("n_samples").get<int>();
    out.d = j.at("d").get<int>();
    out.mixture_weights = to_array3(j.at("mixture_weights"));
    for (int w = 0; w < 3; ++w) {
        out.mu[static_cast<std::size_t>(w)] = to_array3(j.at("mu").at(w));
        const auto s = j.at("sigma").at(w).get<std::vector<double>>();
        std::copy(s.begin(), s.end(), out.sigma[static_cast<std::size_t>(w)].begin());
        out.zeta[static_cast<std::size_t>(w)] = to_array3(j.at("zeta").at(w));
        out.chi[static_cast<std::size_t>(w)] = to_array3(j.at("chi").at(w));
    }
    out.noise_scale = j.at("noise_scale").get<double>();
    out.beta = to_array3(j.at("beta"));
    out.eta = to_array3(j.at("eta"));
    out.phi = to_array3(j.at("phi"));
    out.seed = j.at("seed").get<std::uint64_t>();
    return true;
}

}  // namespace mgsgrf
