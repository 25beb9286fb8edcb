#include "mgsgrf/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include <fmt/format.h>

#include "mgsgrf/multioutput.hpp"

namespace mgsgrf {

SamplerKind sampler_kind_from_string(const std::string& name) {
    static const std::unordered_map<std::string, SamplerKind> table = {
        {"None", SamplerKind::None},           {"CW", SamplerKind::ClassWeight},
        {"ROS", SamplerKind::RandomOversample}, {"RUS", SamplerKind::RandomUndersample},
        {"SMOTE", SamplerKind::Smote},         {"SMOTE-N", SamplerKind::SmoteN},
        {"SMOTE-NC", SamplerKind::SmoteNc},    {"MGS", SamplerKind::Mgs},
        {"MGS-NC", SamplerKind::MgsNc},        {"MGS-KNN", SamplerKind::MgsKnn},
        {"MGS-GRF", SamplerKind::MgsGrf},
    };
    auto it = table.find(name);
    if (it == table.end()) {
        std::string known;
        for (const auto& [k, v] : table) known += known.empty() ? k : ", " + k;
        throw std::invalid_argument(fmt::format("unknown strategy '{}' (known: {})", name, known));
    }
    return it->second;
}

std::string sampler_kind_name(SamplerKind kind) {
    switch (kind) {
        case SamplerKind::None: return "None";
        case SamplerKind::ClassWeight: return "CW";
        case SamplerKind::RandomOversample: return "ROS";
        case SamplerKind::RandomUndersample: return "RUS";
        case SamplerKind::Smote: return "SMOTE";
        case SamplerKind::SmoteN: return "SMOTE-N";
        case SamplerKind::SmoteNc: return "SMOTE-NC";
        case SamplerKind::Mgs: return "MGS";
        case SamplerKind::MgsNc: return "MGS-NC";
        case SamplerKind::MgsKnn: return "MGS-KNN";
        case SamplerKind::MgsGrf: return "MGS-GRF";
    }
    return "?";
}

bool is_mgs_family(SamplerKind kind) {
    return kind == SamplerKind::Mgs || kind == SamplerKind::MgsNc ||
           kind == SamplerKind::MgsKnn || kind == SamplerKind::MgsGrf;
}

Index ResampleResult::synthetic_count() const {
    Index c = 0;
    for (int f : synthetic_mask) c += f;
    return c;
}

MatrixRi ResampleResult::synthetic_categorical() const {
    MatrixRi out(synthetic_count(), data.p());
    Index r = 0;
    for (Index i = 0; i < data.rows(); ++i)
        if (synthetic_mask[static_cast<std::size_t>(i)]) out.row(r++) = data.categorical().row(i);
    return out;
}

Eigen::RowVectorXd smote_interpolate(const Eigen::RowVectorXd& center,
                                     const Eigen::RowVectorXd& neighbor, double w) {
    return center + w * (neighbor - center);
}

int categorical_vote(const MatrixRi& cat, std::span<const Index> rows, int column, int cardinality) {
    if (rows.empty()) throw std::invalid_argument("categorical_vote: no rows to vote over");
    std::vector<int> counts(static_cast<std::size_t>(cardinality), 0);
    for (Index r : rows) ++counts[static_cast<std::size_t>(cat(r, column))];
    int best = 0;
    for (int code = 1; code < cardinality; ++code)
        if (counts[static_cast<std::size_t>(code)] > counts[static_cast<std::size_t>(best)]) best = code;
    return best;
}

LocalGaussian fit_local_gaussian(const MatrixRd& cont, std::vector<Index> neighborhood) {
    const int d = static_cast<int>(cont.cols());
    const auto k = static_cast<double>(neighborhood.size());
    LocalGaussian g;
    g.center = neighborhood.front();
    g.mu = Eigen::VectorXd::Zero(d);
    for (Index r : neighborhood) g.mu += cont.row(r).transpose();
    g.mu /= k;
    g.sigma = Eigen::MatrixXd::Zero(d, d);
    for (Index r : neighborhood) {
        const Eigen::VectorXd v = cont.row(r).transpose() - g.mu;
        g.sigma += v * v.transpose();
    }
    g.sigma /= k;

    g.ridge = std::max(1e-10, 1e-10 * g.sigma.trace() / static_cast<double>(d));
    for (int attempt = 0; attempt < 8; ++attempt) {
        Eigen::LLT<Eigen::MatrixXd> llt(g.sigma +
                                        g.ridge * Eigen::MatrixXd::Identity(d, d));
        if (llt.info() == Eigen::Success) {
            g.factor = llt.matrixL();
            g.neighborhood = std::move(neighborhood);
            return g;
        }
        g.ridge *= 10.0;
    }
    throw std::runtime_error("fit_local_gaussian: covariance factorization failed even with ridge");
}

std::vector<LocalGaussian> fit_mgs(const MatrixRd& minority_cont, int k) {
    const Index n = minority_cont.rows();
    const int d = static_cast<int>(minority_cont.cols());
    if (d < 1) throw std::invalid_argument("fit_mgs: needs at least one continuous feature");
    if (k <= 0) k = d + 1;
    if (n < k)
        throw std::invalid_argument(
            fmt::format("fit_mgs: needs at least K={} minority rows, got {}", k, n));

    const MatrixRi no_cat(n, 0);
    std::vector<LocalGaussian> out;
    out.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        auto neighborhood =
            knn_of_member(minority_cont, no_cat, L2Metric{}, i, NeighborQuery{k, /*include_self=*/true});
        out.push_back(fit_local_gaussian(minority_cont, std::move(neighborhood)));
    }
    return out;
}

MgsDraw mgs_draw(const std::vector<LocalGaussian>& gaussians, Rng& rng) {
    if (gaussians.empty()) throw std::invalid_argument("mgs_draw: no fitted components");
    const auto comp = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(gaussians.size()) - 1));
    const LocalGaussian& g = gaussians[comp];
    Eigen::VectorXd eps(g.mu.size());
    for (Index j = 0; j < eps.size(); ++j) eps[j] = rng.normal();
    return MgsDraw{(g.mu + g.factor * eps).transpose(), comp};
}

std::pair<double, double> class_weights(const MixedDataset& ds) {
    const auto n = static_cast<double>(ds.minority_count());
    const auto big = static_cast<double>(ds.majority_count());
    if (n == 0.0 || big == 0.0)
        throw std::invalid_argument("class_weights: dataset needs both classes");
    const double total = n + big;
    return {total / (2.0 * big), total / (2.0 * n)};
}

namespace {

// Minority block copies shared by the neighbor-based samplers.
struct MinorityBlock {
    std::vector<Index> rows;  // original dataset indices
    MatrixRd cont;
    MatrixRi cat;
};

MinorityBlock minority_block(const MixedDataset& ds) {
    MinorityBlock b;
    b.rows = ds.minority_indices();
    const auto n = static_cast<Index>(b.rows.size());
    b.cont.resize(n, ds.d());
    b.cat.resize(n, ds.p());
    for (Index i = 0; i < n; ++i) {
        b.cont.row(i) = ds.continuous().row(b.rows[static_cast<std::size_t>(i)]);
        b.cat.row(i) = ds.categorical().row(b.rows[static_cast<std::size_t>(i)]);
    }
    return b;
}

ResampleResult assemble_oversampled(const MixedDataset& ds, const MatrixRd& synth_cont,
                                    const MatrixRi& synth_cat,
                                    std::vector<SyntheticProvenance> provenance) {
    const Index n_new = synth_cont.rows();
    MatrixRd cont(ds.rows() + n_new, ds.d());
    MatrixRi cat(ds.rows() + n_new, ds.p());
    cont.topRows(ds.rows()) = ds.continuous();
    cat.topRows(ds.rows()) = ds.categorical();
    cont.bottomRows(n_new) = synth_cont;
    cat.bottomRows(n_new) = synth_cat;
    std::vector<int> labels = ds.labels();
    labels.insert(labels.end(), static_cast<std::size_t>(n_new), 1);
    std::vector<int> mask(static_cast<std::size_t>(ds.rows()), 0);
    mask.insert(mask.end(), static_cast<std::size_t>(n_new), 1);
    return ResampleResult{
        MixedDataset(std::move(cont), std::move(cat), std::move(labels), ds.cardinalities()),
        std::move(mask),
        {},
        std::move(provenance)};
}

void require_neighbor_pool(Index n, int k, SamplerKind kind) {
    if (n < static_cast<Index>(k) + 1)
        throw std::invalid_argument(
            fmt::format("{}: needs at least K+1={} minority rows, got {}", sampler_kind_name(kind), k + 1, n));
}

int default_k(const SamplerConfig& cfg, int d) {
    if (cfg.k_neighbors > 0) return cfg.k_neighbors;
    return is_mgs_family(cfg.kind) ? d + 1 : 5;
}

// Per-center neighbor lists among minority rows, excluding the center.
std::vector<std::vector<Index>> neighbor_lists(const MinorityBlock& b, const DistanceKind& metric, int k) {
    std::vector<std::vector<Index>> lists(static_cast<std::size_t>(b.cont.rows()));
    for (Index i = 0; i < b.cont.rows(); ++i)
        lists[static_cast<std::size_t>(i)] =
            knn_of_member(b.cont, b.cat, metric, i, NeighborQuery{k, /*include_self=*/false});
    return lists;
}

ResampleResult resample_random_over(const MixedDataset& ds, Index n_new, Rng& rng) {
    const auto minority = ds.minority_indices();
    MatrixRd cont(n_new, ds.d());
    MatrixRi cat(n_new, ds.p());
    std::vector<SyntheticProvenance> prov(static_cast<std::size_t>(n_new));
    for (Index t = 0; t < n_new; ++t) {
        const Index src = minority[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(minority.size()) - 1))];
        cont.row(t) = ds.continuous().row(src);
        cat.row(t) = ds.categorical().row(src);
        prov[static_cast<std::size_t>(t)].center = src;
        prov[static_cast<std::size_t>(t)].pick = src;
    }
    return assemble_oversampled(ds, cont, cat, std::move(prov));
}

ResampleResult resample_random_under(const MixedDataset& ds, Rng& rng) {
    const auto majority = ds.majority_indices();
    const auto n = static_cast<std::size_t>(ds.minority_count());
    auto chosen = rng.sample_without_replacement(majority.size(), n);
    std::vector<bool> keep_majority(majority.size(), false);
    for (auto c : chosen) keep_majority[c] = true;

    std::vector<Index> rows;
    rows.reserve(2 * n);
    std::size_t major_pos = 0;
    for (Index i = 0; i < ds.rows(); ++i) {
        if (ds.labels()[static_cast<std::size_t>(i)] == 1) {
            rows.push_back(i);
        } else {
            if (keep_majority[major_pos]) rows.push_back(i);
            ++major_pos;
        }
    }
    ResampleResult result{ds.select_rows(rows), {}, {}, {}};
    result.synthetic_mask.assign(rows.size(), 0);
    return result;
}

ResampleResult resample_smote_like(const SamplerConfig& cfg, const MixedDataset& ds, Index n_new,
                                   Rng& rng) {
    const auto kind = cfg.kind;
    if (kind == SamplerKind::Smote && ds.p() > 0)
        throw std::invalid_argument(
            "SMOTE handles continuous features only; use SMOTE-NC for mixed data");
    if (kind == SamplerKind::Smote && ds.d() < 1)
        throw std::invalid_argument("SMOTE: needs at least one continuous feature");
    if (kind == SamplerKind::SmoteN && ds.d() > 0)
        throw std::invalid_argument(
            "SMOTE-N handles categorical features only; use SMOTE-NC for mixed data");
    if (kind == SamplerKind::SmoteN && ds.p() < 1)
        throw std::invalid_argument("SMOTE-N: needs at least one categorical feature");
    if (kind == SamplerKind::SmoteNc && (ds.d() < 1 || ds.p() < 1))
        throw std::invalid_argument("SMOTE-NC: needs both continuous and categorical features");

    const MinorityBlock b = minority_block(ds);
    const Index n = b.cont.rows();
    const int k = default_k(cfg, ds.d());
    require_neighbor_pool(n, k, kind);

    VdmTable vdm;
    DistanceKind metric = L2Metric{};
    if (kind == SamplerKind::SmoteN) {
        vdm = VdmTable::fit(ds);  // conditional frequencies need both classes
        metric = VdmMetric{&vdm};
    } else if (kind == SamplerKind::SmoteNc) {
        metric = NcMetric{nc_scale(ds)};
    }
    const auto lists = neighbor_lists(b, metric, k);

    MatrixRd cont(n_new, ds.d());
    MatrixRi cat(n_new, ds.p());
    std::vector<SyntheticProvenance> prov(static_cast<std::size_t>(n_new));
    for (Index t = 0; t < n_new; ++t) {
        const auto c = static_cast<std::size_t>(rng.uniform_int(0, n - 1));
        const auto& neighbors = lists[c];
        auto& pv = prov[static_cast<std::size_t>(t)];
        pv.center = b.rows[c];
        for (Index nb : neighbors) pv.neighbors.push_back(b.rows[static_cast<std::size_t>(nb)]);

        if (ds.d() > 0) {
            const auto pick = neighbors[static_cast<std::size_t>(rng.uniform_int(0, k - 1))];
            const double w = rng.uniform();
            cont.row(t) = smote_interpolate(b.cont.row(static_cast<Index>(c)), b.cont.row(pick), w);
            pv.pick = b.rows[static_cast<std::size_t>(pick)];
            pv.interpolation = w;
        }
        for (int j = 0; j < ds.p(); ++j)
            cat(t, j) = categorical_vote(b.cat, neighbors, j,
                                         ds.cardinalities()[static_cast<std::size_t>(j)]);
    }
    return assemble_oversampled(ds, cont, cat, std::move(prov));
}

ResampleResult resample_mgs_family(const SamplerConfig& cfg, const MixedDataset& ds, Index n_new,
                                   Rng& rng) {
    const auto kind = cfg.kind;
    if (ds.d() < 1)
        throw std::invalid_argument(
            fmt::format("{}: needs at least one continuous feature", sampler_kind_name(kind)));
    if (kind == SamplerKind::Mgs && ds.p() > 0)
        throw std::invalid_argument(
            "MGS generates continuous features only; use MGS-NC, MGS-KNN or MGS-GRF for mixed data");
    if (kind != SamplerKind::Mgs && ds.p() < 1)
        throw std::invalid_argument(
            fmt::format("{}: needs at least one categorical feature", sampler_kind_name(kind)));

    const MinorityBlock b = minority_block(ds);
    const Index n = b.cont.rows();
    const int k = default_k(cfg, ds.d());
    require_neighbor_pool(n, k, kind);

    // Local Gaussians: L2 neighborhoods for everything except MGS-NC, which
    // uses the mixed metric and votes over the same neighborhoods.
    std::vector<LocalGaussian> gaussians;
    if (kind == SamplerKind::MgsNc) {
        const DistanceKind metric = NcMetric{nc_scale(ds)};
        gaussians.reserve(static_cast<std::size_t>(n));
        for (Index i = 0; i < n; ++i) {
            auto neighborhood =
                knn_of_member(b.cont, b.cat, metric, i, NeighborQuery{k, /*include_self=*/true});
            gaussians.push_back(fit_local_gaussian(b.cont, std::move(neighborhood)));
        }
    } else {
        gaussians = fit_mgs(b.cont, k);
    }

    std::optional<GrfForest> forest;
    if (kind == SamplerKind::MgsGrf)
        forest = GrfForest::fit(b.cont, b.cat, ds.cardinalities(), cfg.grf, rng);
    if (kind == SamplerKind::MgsKnn && n < cfg.knn_predictor_k)
        throw std::invalid_argument(
            fmt::format("MGS-KNN: predictor k={} exceeds the {} minority rows; add minority data",
                        cfg.knn_predictor_k, n));

    MatrixRd cont(n_new, ds.d());
    MatrixRi cat(n_new, ds.p());
    const MatrixRi no_cat(n, 0);  // kNN prediction works on the continuous block alone
    std::vector<SyntheticProvenance> prov(static_cast<std::size_t>(n_new));
    for (Index t = 0; t < n_new; ++t) {
        const MgsDraw draw = mgs_draw(gaussians, rng);
        cont.row(t) = draw.point;
        const LocalGaussian& g = gaussians[draw.component];
        auto& pv = prov[static_cast<std::size_t>(t)];
        pv.center = b.rows[static_cast<std::size_t>(g.center)];
        for (Index nb : g.neighborhood) pv.neighbors.push_back(b.rows[static_cast<std::size_t>(nb)]);

        switch (kind) {
            case SamplerKind::Mgs:
                break;
            case SamplerKind::MgsNc:
                for (int j = 0; j < ds.p(); ++j)
                    cat(t, j) = categorical_vote(b.cat, g.neighborhood, j,
                                                 ds.cardinalities()[static_cast<std::size_t>(j)]);
                break;
            case SamplerKind::MgsKnn: {
                const PointView point{{cont.row(t).data(), static_cast<std::size_t>(ds.d())}, {}};
                const auto nn = knn_of_point(b.cont, no_cat, L2Metric{}, point, cfg.knn_predictor_k);
                for (int j = 0; j < ds.p(); ++j)
                    cat(t, j) = categorical_vote(b.cat, nn, j,
                                                 ds.cardinalities()[static_cast<std::size_t>(j)]);
                pv.pick = b.rows[static_cast<std::size_t>(nn.front())];
                break;
            }
            case SamplerKind::MgsGrf: {
                const Index pick =
                    forest->sample_index({cont.row(t).data(), static_cast<std::size_t>(ds.d())}, rng);
                cat.row(t) = b.cat.row(pick);
                pv.pick = b.rows[static_cast<std::size_t>(pick)];
                break;
            }
            default:
                break;
        }
    }
    return assemble_oversampled(ds, cont, cat, std::move(prov));
}

}  // namespace

ResampleResult resample(const SamplerConfig& config, const MixedDataset& ds, Rng& rng) {
    const Index n = ds.minority_count();
    const Index majority = ds.majority_count();

    switch (config.kind) {
        case SamplerKind::None: {
            ResampleResult r{ds, {}, {}, {}};
            r.synthetic_mask.assign(static_cast<std::size_t>(ds.rows()), 0);
            return r;
        }
        case SamplerKind::ClassWeight: {
            const auto [w0, w1] = class_weights(ds);
            ResampleResult r{ds, {}, {}, {}};
            r.synthetic_mask.assign(static_cast<std::size_t>(ds.rows()), 0);
            r.sample_weights.resize(static_cast<std::size_t>(ds.rows()));
            for (Index i = 0; i < ds.rows(); ++i)
                r.sample_weights[static_cast<std::size_t>(i)] =
                    ds.labels()[static_cast<std::size_t>(i)] == 1 ? w1 : w0;
            return r;
        }
        default:
            break;
    }

    if (n < 1) throw std::invalid_argument("resample: dataset has no minority rows");
    if (majority < n)
        throw std::invalid_argument("resample: minority class outnumbers majority; nothing to balance");

    if (config.kind == SamplerKind::RandomUndersample) return resample_random_under(ds, rng);

    const Index n_new = majority - n;
    switch (config.kind) {
        case SamplerKind::RandomOversample:
            return resample_random_over(ds, n_new, rng);
        case SamplerKind::Smote:
        case SamplerKind::SmoteN:
        case SamplerKind::SmoteNc:
            return resample_smote_like(config, ds, n_new, rng);
        case SamplerKind::Mgs:
        case SamplerKind::MgsNc:
        case SamplerKind::MgsKnn:
        case SamplerKind::MgsGrf:
            return resample_mgs_family(config, ds, n_new, rng);
        default:
            throw std::logic_error("resample: unhandled sampler kind");
    }
}

}  // namespace mgsgrf
