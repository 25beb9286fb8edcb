#include "mgsgrf/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace mgsgrf {

std::vector<std::vector<Index>> stratified_folds(const std::vector<int>& labels, int folds, Rng& rng) {
    if (folds < 2) throw std::invalid_argument("stratified_folds: need at least 2 folds");
    std::vector<std::vector<Index>> out(static_cast<std::size_t>(folds));
    for (int cls = 1; cls >= 0; --cls) {
        std::vector<Index> members;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == cls) members.push_back(static_cast<Index>(i));
        // Fisher-Yates shuffle, then deal round-robin.
        for (std::size_t i = members.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
            std::swap(members[i - 1], members[j]);
        }
        for (std::size_t i = 0; i < members.size(); ++i)
            out[i % static_cast<std::size_t>(folds)].push_back(members[i]);
    }
    for (auto& fold : out) std::sort(fold.begin(), fold.end());
    return out;
}

namespace {

struct FoldData {
    MixedDataset train;
    MixedDataset test;
};

FoldData make_fold(const MixedDataset& ds, const std::vector<Index>& test_rows) {
    std::vector<char> in_test(static_cast<std::size_t>(ds.rows()), 0);
    for (Index r : test_rows) in_test[static_cast<std::size_t>(r)] = 1;
    std::vector<Index> train_rows;
    train_rows.reserve(static_cast<std::size_t>(ds.rows()) - test_rows.size());
    for (Index i = 0; i < ds.rows(); ++i)
        if (!in_test[static_cast<std::size_t>(i)]) train_rows.push_back(i);
    return FoldData{ds.select_rows(train_rows), ds.select_rows(test_rows)};
}

MetricAggregate aggregate(const std::vector<double>& values) {
    MetricAggregate a;
    if (values.empty()) return a;
    double sum = 0.0;
    for (double v : values) sum += v;
    a.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - a.mean) * (v - a.mean);
        a.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return a;
}

}  // namespace

BenchmarkResult run_benchmark(const MixedDataset& ds, const BenchmarkPlan& plan) {
    if (plan.strategies.empty()) throw std::invalid_argument("benchmark: no strategies given");
    if (plan.repeats < 1) throw std::invalid_argument("benchmark: repeats must be positive");

    const int n_strategies = static_cast<int>(plan.strategies.size());
    const int cells_total = plan.repeats * plan.folds * n_strategies;

    // Folds and scaled splits are shared across strategies of one (repeat,
    // fold); precompute them serially (memory: folds of one repeat at a time
    // would be leaner, but datasets here are small).
    std::vector<std::vector<FoldData>> splits(static_cast<std::size_t>(plan.repeats));
    for (int r = 0; r < plan.repeats; ++r) {
        Rng fold_rng(derive_seed({plan.master_seed, 0xF01DULL, static_cast<std::uint64_t>(r)}));
        const auto folds = stratified_folds(ds.labels(), plan.folds, fold_rng);
        for (int f = 0; f < plan.folds; ++f) {
            FoldData fold = make_fold(ds, folds[static_cast<std::size_t>(f)]);
            const Scaler scaler = Scaler::fit(fold.train);
            fold.train = scaler.apply(fold.train);
            fold.test = scaler.apply(fold.test);
            splits[static_cast<std::size_t>(r)].push_back(std::move(fold));
        }
    }

    BenchmarkResult result;
    result.cells.resize(static_cast<std::size_t>(cells_total));
    std::vector<ScoredLabels> repeat0_scores(
        static_cast<std::size_t>(n_strategies * plan.folds));
    std::vector<char> repeat0_ok(static_cast<std::size_t>(n_strategies * plan.folds), 0);

    auto run_cell = [&](int cell_index) {
        const int s = cell_index % n_strategies;
        const int f = (cell_index / n_strategies) % plan.folds;
        const int r = cell_index / (n_strategies * plan.folds);
        const BenchmarkStrategy& strategy = plan.strategies[static_cast<std::size_t>(s)];
        const FoldData& fold = splits[static_cast<std::size_t>(r)][static_cast<std::size_t>(f)];

        CellReport cell;
        cell.strategy = strategy.name;
        cell.repeat = r;
        cell.fold = f;
        cell.seed = derive_seed({plan.master_seed, static_cast<std::uint64_t>(r),
                                 static_cast<std::uint64_t>(f), static_cast<std::uint64_t>(s)});
        try {
            Rng rng(cell.seed);
            const auto t0 = std::chrono::steady_clock::now();
            const ResampleResult resampled = resample(strategy.sampler, fold.train, rng);
            const auto t1 = std::chrono::steady_clock::now();
            const GbdtModel model =
                GbdtModel::fit(resampled.data, resampled.sample_weights, plan.gbdt);
            const auto t2 = std::chrono::steady_clock::now();

            const Eigen::VectorXd proba = model.predict_proba(fold.test);
            ScoredLabels scored;
            scored.scores.assign(proba.data(), proba.data() + proba.size());
            scored.labels = fold.test.labels();

            cell.pr_auc = pr_auc(scored);
            cell.roc_auc = roc_auc(scored);
            cell.precision_at_recall = precision_at_recall(scored, plan.recall_threshold);
            if (resampled.synthetic_count() > 0) {
                const auto reference = CombinationSet::from_rows(fold.train.categorical(),
                                                                 fold.train.minority_indices());
                cell.coherence = coherence(resampled.synthetic_categorical(), reference);
            } else {
                cell.coherence = 1.0;  // nothing generated, nothing incoherent
            }
            cell.resample_seconds = std::chrono::duration<double>(t1 - t0).count();
            cell.fit_seconds = std::chrono::duration<double>(t2 - t1).count();
            cell.ok = true;
            if (r == 0) {
                repeat0_scores[static_cast<std::size_t>(s * plan.folds + f)] = std::move(scored);
                repeat0_ok[static_cast<std::size_t>(s * plan.folds + f)] = 1;
            }
        } catch (const std::exception& e) {
            cell.ok = false;
            cell.error = e.what();
        }
        result.cells[static_cast<std::size_t>(cell_index)] = std::move(cell);
    };

    if (plan.jobs <= 1) {
        for (int c = 0; c < cells_total; ++c) run_cell(c);
    } else {
        std::atomic<int> next{0};
        auto worker = [&] {
            for (int c = next.fetch_add(1); c < cells_total; c = next.fetch_add(1)) run_cell(c);
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < plan.jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // Aggregates in strategy order; summation order is fixed by cell index.
    for (int s = 0; s < n_strategies; ++s) {
        StrategySummary summary;
        summary.strategy = plan.strategies[static_cast<std::size_t>(s)].name;
        std::vector<double> pr, roc, par, coh, secs;
        for (int c = s; c < cells_total; c += n_strategies) {
            const CellReport& cell = result.cells[static_cast<std::size_t>(c)];
            if (!cell.ok) {
                ++summary.cells_failed;
                continue;
            }
            ++summary.cells_ok;
            pr.push_back(cell.pr_auc);
            roc.push_back(cell.roc_auc);
            par.push_back(cell.precision_at_recall);
            coh.push_back(cell.coherence);
            secs.push_back(cell.resample_seconds + cell.fit_seconds);
        }
        summary.pr_auc = aggregate(pr);
        summary.roc_auc = aggregate(roc);
        summary.precision_at_recall = aggregate(par);
        summary.coherence = aggregate(coh);
        summary.time_seconds = aggregate(secs);
        result.summaries.push_back(std::move(summary));

        ScoredLabels pooled;
        bool all_ok = true;
        for (int f = 0; f < plan.folds; ++f) {
            if (!repeat0_ok[static_cast<std::size_t>(s * plan.folds + f)]) {
                all_ok = false;
                break;
            }
            const ScoredLabels& part = repeat0_scores[static_cast<std::size_t>(s * plan.folds + f)];
            pooled.scores.insert(pooled.scores.end(), part.scores.begin(), part.scores.end());
            pooled.labels.insert(pooled.labels.end(), part.labels.begin(), part.labels.end());
        }
        if (all_ok)
            result.pooled_scores.emplace_back(plan.strategies[static_cast<std::size_t>(s)].name,
                                              std::move(pooled));
    }
    return result;
}

}  // namespace mgsgrf
