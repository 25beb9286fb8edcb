// Command-line front end: simulate / resample / benchmark / diagnose.
//
// Every command takes an explicit --seed and writes into --out. Outputs are
// byte-identical across runs with the same inputs and seed; wall-clock
// timings are the one exception and live in their own timings.csv.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include <fmt/format.h>

#include "mgsgrf/benchmark.hpp"
#include "mgsgrf/csv.hpp"
#include "mgsgrf/dataset.hpp"
#include "mgsgrf/metrics.hpp"
#include "mgsgrf/samplers.hpp"
#include "mgsgrf/simgen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mgsgrf;

namespace {

struct DatasetOptions {
    std::string data_path;
    std::string schema_path;
    std::string dict_path;
    std::string params_path;
    std::string protocol;
    int config_index = 1;
    int dimension = 5;
    int samples = 5000;
    int modalities = 4;
};

void add_dataset_options(CLI::App* cmd, DatasetOptions& opt) {
    cmd->add_option("--data", opt.data_path, "dataset CSV path");
    cmd->add_option("--schema", opt.schema_path, "schema JSON path");
    cmd->add_option("--dict", opt.dict_path, "categorical dictionary JSON (pins code assignment)");
    cmd->add_option("--params", opt.params_path, "simulation params JSON for exact replay");
    cmd->add_option("--protocol", opt.protocol, "generate on the fly: coherence | association")
        ->check(CLI::IsMember({"coherence", "association"}));
    cmd->add_option("--config-index", opt.config_index, "coherence configuration index (>=1)");
    cmd->add_option("--dim", opt.dimension, "association protocol total dimension (>=4)");
    cmd->add_option("--samples", opt.samples, "generated sample count");
    cmd->add_option("--m", opt.modalities, "coherence protocol modalities per categorical column");
}

struct LoadedDataset {
    MixedDataset data;
    Schema schema;
    enum class Source { File, Coherence, Association } source = Source::File;
    CoherenceSimParams coherence_params;
    AssociationSimParams association_params;

    void save_generator_params(const fs::path& path) const {
        if (source == Source::Coherence) save_params(path, coherence_params);
        if (source == Source::Association) save_params(path, association_params);
    }
};

LoadedDataset materialize(const DatasetOptions& opt, std::uint64_t seed) {
    if (!opt.data_path.empty()) {
        if (opt.schema_path.empty())
            throw std::runtime_error("--data requires --schema");
        Schema schema = load_schema(opt.schema_path);
        if (!opt.dict_path.empty()) load_dictionary(opt.dict_path, schema);
        MixedDataset ds = load_csv(opt.data_path, schema);
        return LoadedDataset{std::move(ds), std::move(schema), LoadedDataset::Source::File, {}, {}};
    }

    CoherenceSimParams cp;
    AssociationSimParams ap;
    bool have_coherence = false, have_association = false;
    if (!opt.params_path.empty()) {
        have_coherence = load_coherence_params(opt.params_path, cp);
        if (!have_coherence) have_association = load_association_params(opt.params_path, ap);
        if (!have_coherence && !have_association)
            throw std::runtime_error("params file has no recognizable protocol field");
    } else if (opt.protocol == "coherence") {
        cp = default_coherence_params(opt.config_index, seed, opt.modalities);
        cp.n_samples = opt.samples;
        have_coherence = true;
    } else if (opt.protocol == "association") {
        ap = default_association_params(opt.dimension, seed);
        ap.n_samples = opt.samples;
        have_association = true;
    } else {
        throw std::runtime_error("give either --data/--schema, --params, or --protocol");
    }

    if (have_coherence) {
        Rng rng(cp.seed);
        MixedDataset ds = gen_coherence(cp, rng);
        return LoadedDataset{std::move(ds), coherence_schema(cp), LoadedDataset::Source::Coherence, cp, {}};
    }
    Rng rng(ap.seed);
    AssociationSample sample = gen_association(ap, rng);
    return LoadedDataset{std::move(sample.data), association_schema(ap),
                         LoadedDataset::Source::Association, {}, ap};
}

struct StrategyOptions {
    std::vector<std::string> names;
    int k_neighbors = 0;
    int grf_trees = 100;
    bool grf_inbag_leaves = false;
};

void add_strategy_options(CLI::App* cmd, StrategyOptions& opt, bool repeatable) {
    auto* o = cmd->add_option("--strategy", opt.names,
                              "strategy name: None, CW, ROS, RUS, SMOTE, SMOTE-N, SMOTE-NC, MGS, "
                              "MGS-NC, MGS-1NN, MGS-5NN, MGS-KNN, MGS-GRF");
    if (!repeatable) o->expected(1);
    cmd->add_option("--k", opt.k_neighbors, "neighborhood size (default: 5 SMOTE family, d+1 MGS family)");
    cmd->add_option("--grf-trees", opt.grf_trees, "trees in the MGS-GRF forest");
    cmd->add_flag("--grf-inbag-leaves", opt.grf_inbag_leaves,
                  "restrict forest leaf lists to in-bag rows instead of all training rows");
}

SamplerConfig make_sampler(const std::string& name, const StrategyOptions& opt) {
    SamplerConfig cfg;
    if (name == "MGS-1NN") {
        cfg.kind = SamplerKind::MgsKnn;
        cfg.knn_predictor_k = 1;
    } else if (name == "MGS-5NN") {
        cfg.kind = SamplerKind::MgsKnn;
        cfg.knn_predictor_k = 5;
    } else {
        cfg.kind = sampler_kind_from_string(name);
    }
    cfg.k_neighbors = opt.k_neighbors;
    cfg.grf.n_trees = opt.grf_trees;
    cfg.grf.leaf_contains_all_rows = !opt.grf_inbag_leaves;
    return cfg;
}

fs::path prepare_out_dir(const std::string& out) {
    if (out.empty()) throw std::runtime_error("--out is required");
    fs::path dir(out);
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    f << content;
}

int cmd_simulate(const DatasetOptions& dopt, std::uint64_t seed, const std::string& out) {
    const fs::path dir = prepare_out_dir(out);
    if (dopt.protocol.empty() && dopt.params_path.empty())
        throw std::runtime_error("simulate needs --protocol or --params");
    LoadedDataset loaded = materialize(dopt, seed);
    write_csv(dir / "data.csv", loaded.data, loaded.schema);
    write_schema(dir / "schema.json", loaded.schema);
    write_dictionary(dir / "dictionary.json", loaded.schema);
    loaded.save_generator_params(dir / "params.json");
    std::cout << fmt::format("simulate: wrote {} rows ({} minority) to {}\n", loaded.data.rows(),
                             loaded.data.minority_count(), (dir / "data.csv").string());
    return 0;
}

int cmd_resample(const DatasetOptions& dopt, const StrategyOptions& sopt, std::uint64_t seed,
                 const std::string& out) {
    if (sopt.names.size() != 1) throw std::runtime_error("resample takes exactly one --strategy");
    const fs::path dir = prepare_out_dir(out);
    LoadedDataset loaded = materialize(dopt, seed);

    Rng rng(derive_seed({seed, 0x5A3FULL}));
    const SamplerConfig cfg = make_sampler(sopt.names.front(), sopt);
    const ResampleResult result = resample(cfg, loaded.data, rng);

    write_csv(dir / "augmented.csv", result.data, loaded.schema, "synthetic", &result.synthetic_mask);
    write_dictionary(dir / "dictionary.json", loaded.schema);

    std::string prov = "row,center,pick,interpolation,neighbors\n";
    const Index originals = result.data.rows() - result.synthetic_count();
    for (std::size_t i = 0; i < result.provenance.size(); ++i) {
        const auto& p = result.provenance[i];
        std::string neighbors;
        for (Index nb : p.neighbors) neighbors += (neighbors.empty() ? "" : " ") + std::to_string(nb);
        prov += fmt::format("{},{},{},{},{}\n", originals + static_cast<Index>(i), p.center, p.pick,
                            std::isnan(p.interpolation) ? "" : fmt::format("{:.17g}", p.interpolation),
                            neighbors);
    }
    write_text(dir / "provenance.csv", prov);

    if (!result.sample_weights.empty()) {
        std::string w = "row,weight\n";
        for (std::size_t i = 0; i < result.sample_weights.size(); ++i)
            w += fmt::format("{},{:.17g}\n", i, result.sample_weights[i]);
        write_text(dir / "weights.csv", w);
    }
    std::cout << fmt::format("resample: {} -> {} rows ({} synthetic) via {}\n", loaded.data.rows(),
                             result.data.rows(), result.synthetic_count(), sopt.names.front());
    return 0;
}

int cmd_benchmark(const DatasetOptions& dopt, const StrategyOptions& sopt, std::uint64_t seed,
                  const std::string& out, int repeats, int folds, double recall_threshold, int jobs) {
    if (sopt.names.empty()) throw std::runtime_error("benchmark needs at least one --strategy");
    const fs::path dir = prepare_out_dir(out);
    LoadedDataset loaded = materialize(dopt, seed);

    BenchmarkPlan plan;
    for (const auto& name : sopt.names) plan.strategies.push_back({name, make_sampler(name, sopt)});
    plan.repeats = repeats;
    plan.folds = folds;
    plan.recall_threshold = recall_threshold;
    plan.master_seed = seed;
    plan.jobs = jobs;

    const BenchmarkResult result = run_benchmark(loaded.data, plan);

    std::string cells = "strategy,repeat,fold,seed,ok,pr_auc,roc_auc,pr_at_rec,coherence,error\n";
    std::string timings = "strategy,repeat,fold,resample_seconds,fit_seconds\n";
    int failed = 0;
    for (const auto& c : result.cells) {
        cells += fmt::format("{},{},{},{},{},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", c.strategy, c.repeat,
                             c.fold, c.seed, c.ok ? 1 : 0, c.pr_auc, c.roc_auc, c.precision_at_recall,
                             c.coherence, c.error);
        timings += fmt::format("{},{},{},{:.6f},{:.6f}\n", c.strategy, c.repeat, c.fold,
                               c.resample_seconds, c.fit_seconds);
        failed += c.ok ? 0 : 1;
    }
    write_text(dir / "cells.csv", cells);
    write_text(dir / "timings.csv", timings);

    json report;
    report["repeats"] = plan.repeats;
    report["folds"] = plan.folds;
    report["recall_threshold"] = plan.recall_threshold;
    report["seed"] = plan.master_seed;
    report["strategies"] = json::array();
    for (const auto& s : result.summaries) {
        json entry;
        entry["strategy"] = s.strategy;
        entry["cells_ok"] = s.cells_ok;
        entry["cells_failed"] = s.cells_failed;
        auto agg = [](const MetricAggregate& a) { return json{{"mean", a.mean}, {"std", a.stddev}}; };
        entry["pr_auc"] = agg(s.pr_auc);
        entry["roc_auc"] = agg(s.roc_auc);
        entry["pr_at_rec"] = agg(s.precision_at_recall);
        entry["coherence"] = agg(s.coherence);
        report["strategies"].push_back(entry);
    }
    write_text(dir / "report.json", report.dump(2) + "\n");

    for (const auto& [name, scored] : result.pooled_scores) {
        std::string pr = "recall,precision\n";
        for (const auto& pt : pr_curve_points(scored)) pr += fmt::format("{:.17g},{:.17g}\n", pt.x, pt.y);
        write_text(dir / fmt::format("curve_pr_{}.csv", name), pr);
        std::string roc = "fpr,tpr\n";
        for (const auto& pt : roc_curve_points(scored)) roc += fmt::format("{:.17g},{:.17g}\n", pt.x, pt.y);
        write_text(dir / fmt::format("curve_roc_{}.csv", name), roc);
    }

    for (const auto& s : result.summaries)
        std::cout << fmt::format(
            "{:>10}: PR AUC {:.4f} +- {:.4f} | ROC AUC {:.4f} +- {:.4f} | Pr@rec {:.4f} | Coh {:.4f} "
            "| cells {}/{}\n",
            s.strategy, s.pr_auc.mean, s.pr_auc.stddev, s.roc_auc.mean, s.roc_auc.stddev,
            s.precision_at_recall.mean, s.coherence.mean, s.cells_ok, s.cells_ok + s.cells_failed);
    if (failed > 0) {
        std::cout << fmt::format("warning: {} cell(s) failed:\n", failed);
        for (const auto& c : result.cells)
            if (!c.ok)
                std::cout << fmt::format("  {} repeat {} fold {}: {}\n", c.strategy, c.repeat, c.fold,
                                         c.error);
    }
    return 0;
}

int cmd_diagnose(const DatasetOptions& dopt, const StrategyOptions& sopt,
                 const std::vector<std::string>& classifiers, std::uint64_t seed,
                 const std::string& out, int jobs) {
    const fs::path dir = prepare_out_dir(out);
    LoadedDataset loaded = materialize(dopt, seed);
    const MixedDataset& ds = loaded.data;

    json report;
    report["seed"] = seed;

    if (!sopt.names.empty()) {
        const auto reference =
            CombinationSet::from_rows(ds.categorical(), ds.minority_indices());
        json coh = json::object();
        for (std::size_t s = 0; s < sopt.names.size(); ++s) {
            Rng rng(derive_seed({seed, 0xD1A6ULL, static_cast<std::uint64_t>(s)}));
            const ResampleResult result = resample(make_sampler(sopt.names[s], sopt), ds, rng);
            const double value = result.synthetic_count() > 0
                                     ? coherence(result.synthetic_categorical(), reference)
                                     : 1.0;
            coh[sopt.names[s]] = value;
            std::cout << fmt::format("coherence[{}] = {:.4f}\n", sopt.names[s], value);
        }
        report["coherence"] = coh;
    }

    if (!classifiers.empty()) {
        const auto minority = ds.minority_indices();
        MatrixRd cont(static_cast<Index>(minority.size()), ds.d());
        MatrixRi cat(static_cast<Index>(minority.size()), ds.p());
        for (std::size_t i = 0; i < minority.size(); ++i) {
            cont.row(static_cast<Index>(i)) = ds.continuous().row(minority[i]);
            cat.row(static_cast<Index>(i)) = ds.categorical().row(minority[i]);
        }

        std::optional<AssociationBayesOracle> oracle;
        BayesPredictor bayes_fn;
        if (loaded.source == LoadedDataset::Source::Association) {
            oracle.emplace(loaded.association_params);
            bayes_fn = [&oracle](std::span<const double> x) {
                Eigen::RowVectorXi v(1);
                v[0] = oracle->predict(x);
                return v;
            };
        }

        json asso = json::object();
        for (const auto& name : classifiers) {
            MultiOutputFactory factory;
            if (name == "1nn") {
                factory = [] { return std::make_unique<KnnMultiOutput>(1); };
            } else if (name == "5nn") {
                factory = [] { return std::make_unique<KnnMultiOutput>(5); };
            } else if (name == "grf") {
                GrfConfig cfg;
                cfg.n_trees = sopt.grf_trees;
                const std::uint64_t grf_seed = derive_seed({seed, 0x6FULL});
                factory = [cfg, grf_seed] { return std::make_unique<GrfMultiOutput>(cfg, grf_seed); };
            } else {
                throw std::runtime_error(fmt::format("unknown classifier '{}' (use 1nn, 5nn, grf)", name));
            }
            const AssociationResult r = association(factory, cont, cat, ds.cardinalities(),
                                                    bayes_fn ? &bayes_fn : nullptr, jobs);
            json entry;
            entry["value"] = r.value;
            entry["loo_accuracy"] = r.loo_accuracy;
            entry["bayes_adjusted"] = r.bayes_adjusted;
            if (r.bayes_adjusted) entry["bayes_error"] = r.bayes_error;
            asso[name] = entry;
            std::cout << fmt::format("association[{}] = {:.4f} ({})\n", name, r.value,
                                     r.bayes_adjusted ? "excess-risk form" : "LOO accuracy, without Bayes term");
        }
        report["association"] = asso;
    }

    write_text(dir / "diagnosis.json", report.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Oversampling strategies for imbalanced mixed-feature tabular data"};
    app.require_subcommand(1);
    app.set_config("--config");

    std::uint64_t seed = 0;
    std::string out;
    int jobs = 1;

    DatasetOptions sim_opt, res_opt, bench_opt, diag_opt;
    StrategyOptions res_strat, bench_strat, diag_strat;
    std::vector<std::string> diag_classifiers;
    int repeats = 20, folds = 5;
    double recall_threshold = 0.2;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "master seed (mandatory)")->required();
        cmd->add_option("--out", out, "output directory")->required();
        cmd->add_option("--jobs", jobs, "worker threads (results are independent of this)");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "generate a benchmark dataset");
    add_dataset_options(simulate, sim_opt);
    add_common(simulate);

    CLI::App* resample_cmd = app.add_subcommand("resample", "rebalance a dataset with one strategy");
    add_dataset_options(resample_cmd, res_opt);
    add_strategy_options(resample_cmd, res_strat, /*repeatable=*/false);
    add_common(resample_cmd);

    CLI::App* benchmark = app.add_subcommand("benchmark", "repeated stratified CV over strategies");
    add_dataset_options(benchmark, bench_opt);
    add_strategy_options(benchmark, bench_strat, /*repeatable=*/true);
    benchmark->add_option("--repeats", repeats, "protocol repetitions");
    benchmark->add_option("--folds", folds, "cross-validation folds");
    benchmark->add_option("--recall-threshold", recall_threshold, "x of Pr-at-rec(x)");
    add_common(benchmark);

    CLI::App* diagnose = app.add_subcommand("diagnose", "coherence / association diagnostics");
    add_dataset_options(diagnose, diag_opt);
    add_strategy_options(diagnose, diag_strat, /*repeatable=*/true);
    diagnose->add_option("--classifier", diag_classifiers, "association classifier: 1nn, 5nn, grf");
    add_common(diagnose);

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(sim_opt, seed, out);
        if (resample_cmd->parsed()) return cmd_resample(res_opt, res_strat, seed, out);
        if (benchmark->parsed())
            return cmd_benchmark(bench_opt, bench_strat, seed, out, repeats, folds, recall_threshold, jobs);
        if (diagnose->parsed()) return cmd_diagnose(diag_opt, diag_strat, diag_classifiers, seed, out, jobs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
