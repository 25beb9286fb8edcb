#pragma once

#include <string>
#include <vector>

#include "mgsgrf/dataset.hpp"
#include "mgsgrf/gbdt.hpp"
#include "mgsgrf/metrics.hpp"
#include "mgsgrf/samplers.hpp"

namespace mgsgrf {

struct BenchmarkStrategy {
    std::string name;
    SamplerConfig sampler;
};

struct BenchmarkPlan {
    std::vector<BenchmarkStrategy> strategies;
    int repeats = 20;
    int folds = 5;
    double recall_threshold = 0.2;
    std::uint64_t master_seed = 0;
    int jobs = 1;
    GbdtParams gbdt;
};

/// One (strategy, repeat, fold) evaluation. Failed preconditions are recorded
/// rather than fatal; `error` carries the reason.
struct CellReport {
    std::string strategy;
    int repeat = 0;
    int fold = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    double pr_auc = 0.0;
    double roc_auc = 0.0;
    double precision_at_recall = 0.0;
    double coherence = 0.0;
    double resample_seconds = 0.0;
    double fit_seconds = 0.0;
};

struct MetricAggregate {
    double mean = 0.0;
    double stddev = 0.0;
};

struct StrategySummary {
    std::string strategy;
    int cells_ok = 0;
    int cells_failed = 0;
    MetricAggregate pr_auc, roc_auc, precision_at_recall, coherence, time_seconds;
};

struct BenchmarkResult {
    std::vector<CellReport> cells;
    std::vector<StrategySummary> summaries;
    /// Repeat-0 test scores pooled across folds, one entry per strategy, for
    /// PR/ROC curve export. Empty for strategies whose repeat-0 cells failed.
    std::vector<std::pair<std::string, ScoredLabels>> pooled_scores;
};

/// Stratified fold assignment: shuffles each class separately and deals
/// round-robin, so per-fold minority counts differ by at most one. Returns
/// the test index set of each fold.
std::vector<std::vector<Index>> stratified_folds(const std::vector<int>& labels, int folds, Rng& rng);

/// Repeated stratified K-fold benchmark: per fold, fit the scaler on the
/// train split, apply every strategy to the same scaled train fold, fit the
/// GBDT (honoring ClassWeight sample weights), and score the scaled test
/// fold. Timing covers resampling plus classifier fitting. Cells are
/// independent given their derived seeds; `jobs` > 1 must not change any
/// reported number.
BenchmarkResult run_benchmark(const MixedDataset& ds, const BenchmarkPlan& plan);

}  // namespace mgsgrf
