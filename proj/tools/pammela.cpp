#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>

#include "pammela/csv.hpp"
#include "pammela/datagen.hpp"
#include "pammela/inference.hpp"
#include "pammela/io.hpp"

namespace fs = std::filesystem;
using namespace pammela;

namespace {

struct LearnerFlags {
    std::string learner = "dt";
    std::string learner_config;
    std::uint64_t seed = 0;
    int max_depth = -1;
    int min_samples_split = -1;
    int trees = -1;
    int stages = -1;
    double learning_rate = -1.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--learner", learner, "dt | rf | et | gb");
        cmd->add_option("--learner-config", learner_config, "key=value spec file");
        cmd->add_option("--seed", seed, "seed for all randomness");
        cmd->add_option("--max-depth", max_depth, "tree depth limit (0 = unlimited)");
        cmd->add_option("--min-samples-split", min_samples_split);
        cmd->add_option("--trees", trees, "ensemble size (rf/et)");
        cmd->add_option("--stages", stages, "boosting stages (gb)");
        cmd->add_option("--learning-rate", learning_rate, "boosting shrinkage (gb)");
    }

    LearnerSpec spec() const {
        LearnerSpec s = learner_config.empty()
                            ? LearnerSpec::defaults(learner_kind_from_string(learner), seed)
                            : learner_spec_from_config(learner_config);
        if (!learner_config.empty() && !s.seed) s.seed = seed;
        if (max_depth >= 0) s.max_depth = max_depth;
        if (min_samples_split >= 0) s.min_samples_split = min_samples_split;
        if (trees >= 0) s.n_trees = trees;
        if (stages >= 0) s.n_stages = stages;
        if (learning_rate >= 0.0) s.learning_rate = learning_rate;
        s.validate();
        return s;
    }
};

struct NegativeFlags {
    std::string mode = "sampled";
    double ratio = 2.0;
    std::uint64_t cap = 10'000'000;

    void attach(CLI::App* cmd) {
        cmd->add_option("--neg-mode", mode, "sampled | exhaustive");
        cmd->add_option("--neg-ratio", ratio, "negatives per grounded positive (sampled)");
        cmd->add_option("--universe-cap", cap, "exhaustive enumeration cap");
    }

    NegativeMode negmode(std::uint64_t seed) const {
        if (mode == "exhaustive") return NegativeMode::exhaustive(cap);
        if (mode == "sampled") return NegativeMode::sampled(ratio, seed);
        raise(ErrorClass::InvalidSpec, "unknown negative mode '" + mode + "'");
    }
};

struct DataFlags {
    std::string catalog_path;
    std::string policy_path;
    std::string log_path;
    std::string clusters_path;
    std::string strategy = "naive";

    void attach(CLI::App* cmd, bool with_log = true) {
        cmd->add_option("--catalog", catalog_path, "catalog CSV")->required();
        cmd->add_option("--policy", policy_path, "policy CSV")->required();
        if (with_log) cmd->add_option("--log", log_path, "request log CSV")->required();
        cmd->add_option("--clusters", clusters_path, "cluster map CSV (AVC)");
        cmd->add_option("--strategy", strategy, "naive | arfe | avc | arfe+avc");
    }

    AttributeCatalog catalog() const { return io::load_catalog(catalog_path); }

    EncoderConfig config(const AttributeCatalog& cat) const {
        std::vector<ClusterAssignment> clusters;
        if (!clusters_path.empty()) clusters = io::load_clusters(clusters_path);
        return io::make_encoder_config(strategy, clusters, cat);
    }
};

void write_metrics_files(const InferenceRun& run, const std::string& base,
                         const std::string& strategy, const std::string& learner) {
    if (!run.metrics) return;
    std::vector<BenchCell> cells = {{strategy, learner, *run.metrics}};
    csv::write_file(base + ".csv", metrics_csv(cells));
    csv::write_file(base + ".txt", metrics_table(cells));
}

int cmd_synth(const std::string& tmpl_name, const std::string& config_path,
              std::uint64_t seed, bool full_scale, const std::string& out_dir) {
    SchemaTemplate tmpl = config_path.empty()
                              ? template_by_name(tmpl_name, seed, full_scale)
                              : template_from_config(config_path);
    SynthesizedDataset data = synthesize(tmpl);
    fs::create_directories(out_dir);
    io::save_catalog(data.policy.catalog, out_dir + "/catalog.csv");
    io::save_policy(data.policy, out_dir + "/policy.csv");
    io::save_log(data.log, data.extended_catalog, out_dir + "/log.csv");
    io::save_clusters(data.clusters, out_dir + "/clusters.csv");
    std::cout << "template " << tmpl.name << ": " << data.policy.rules.size()
              << " rules, " << data.log.entries.size() << " requests -> " << out_dir
              << "\n";
    return 0;
}

int cmd_train(const DataFlags& data, const LearnerFlags& learner,
              const NegativeFlags& neg, const std::string& model_path,
              const std::string& encoded_path) {
    AttributeCatalog catalog = data.catalog();
    Policy policy = io::load_policy(data.policy_path, catalog);
    EncoderConfig config = data.config(catalog);
    LearnerSpec spec = learner.spec();

    std::vector<Rule> training = ground_rules(policy);
    {
        std::vector<Rule> negatives =
            derive_negative_rules(policy, neg.negmode(learner.seed));
        std::unordered_set<Tuple, TupleHash> seen;
        for (const Rule& r : training) seen.insert(tuple_of(r));
        for (Rule& r : negatives)
            if (seen.insert(tuple_of(r)).second) training.push_back(std::move(r));
    }
    Encoder encoder = fit_encoder(policy.catalog, config);
    EncodedDataset dataset = encode_dataset(encoder, training);
    if (!encoded_path.empty()) io::save_encoded(dataset, encoded_path);

    auto start = std::chrono::steady_clock::now();
    TrainedModel model = train(spec, dataset);
    model.catalog_hash = policy.catalog.hash();
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    save_model(model, model_path);
    std::cout << "trained " << to_string(spec.kind) << " on " << dataset.rows.size()
              << " rows (" << dataset.n_features() << " features, "
              << dataset.n_classes() << " classes) in " << ms << " ms -> " << model_path
              << "\n";
    if (model.degenerate)
        std::cout << "warning: single-class training data, constant model\n";
    return 0;
}

int cmd_infer(const DataFlags& data, const LearnerFlags& learner,
              const NegativeFlags& neg, const std::string& model_path,
              const std::string& out_path, const std::string& metrics_base,
              const std::string& augmented_path, const std::string& out_catalog,
              bool adapt_mode, const std::string& additions_path) {
    AttributeCatalog catalog = data.catalog();
    Policy policy = io::load_policy(data.policy_path, catalog);
    RequestLog log = io::load_log(data.log_path, catalog);
    EncoderConfig config = data.config(catalog);

    if (adapt_mode) {
        std::vector<CatalogAddition> additions;
        if (!additions_path.empty()) {
            // Catalog-format CSV of target-organization additions.
            AttributeCatalog add_cat = io::load_catalog(additions_path);
            for (std::size_t i = 0; i < add_cat.size(); ++i) {
                const AttributeDef& def = add_cat.attribute(i);
                for (const std::string& v : def.values)
                    additions.push_back({def.category, def.name, v, std::nullopt});
            }
        }
        Policy target = adapt_policy(policy, log, additions, learner.spec(), config,
                                     neg.negmode(learner.seed));
        io::save_policy(target, augmented_path);
        if (!out_catalog.empty()) io::save_catalog(target.catalog, out_catalog);
        std::cout << "target policy: " << target.rules.size() << " rules -> "
                  << augmented_path << "\n";
        return 0;
    }

    InferenceRun run;
    if (!model_path.empty() && fs::exists(model_path)) {
        auto model = std::make_shared<TrainedModel>(load_model(model_path));
        run = classify_requests(policy, log, std::move(model), config);
    } else {
        run = solve_abac_pip(policy, log, learner.spec(), config,
                             neg.negmode(learner.seed));
        if (!model_path.empty()) save_model(*run.model, model_path);
    }

    if (!out_path.empty()) csv::write_file(out_path, run_report_csv(run));
    if (!metrics_base.empty())
        write_metrics_files(run, metrics_base, data.strategy, learner.learner);
    if (!augmented_path.empty()) {
        Policy augmented = augment_policy(policy, run);
        io::save_policy(augmented, augmented_path);
        if (!out_catalog.empty()) io::save_catalog(augmented.catalog, out_catalog);
    }

    std::cout << run.decisions.size() << " decisions, " << run.skipped.size()
              << " skipped (train " << run.train_ms << " ms, infer " << run.infer_ms
              << " ms)";
    if (run.metrics)
        std::cout << "; accuracy " << format_fixed(run.metrics->accuracy) << ", f1 "
                  << format_fixed(run.metrics->f1);
    std::cout << "\n";
    return 0;
}

int cmd_eval(const std::string& report_path, const std::string& log_path,
             const std::string& catalog_path, bool strict, const std::string& out_base) {
    AttributeCatalog catalog = io::load_catalog(catalog_path);
    RequestLog log = io::load_log(log_path, catalog);
    auto rows = csv::parse_file(report_path);
    if (rows.empty() || rows[0].empty() || rows[0][0] != "request-id")
        raise(ErrorClass::FormatError, report_path + ": not a run report");

    std::vector<DecisionRecord> records;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() < 5)
            raise(ErrorClass::FormatError, report_path + ": bad row width");
        if (!rows[r][4].empty()) continue; // skipped request, not scored
        auto idx = static_cast<std::size_t>(std::stoull(rows[r][0]));
        if (idx >= log.entries.size())
            raise(ErrorClass::FormatError, report_path + ": request-id out of range");
        DecisionRecord rec;
        rec.predicted_grant = rows[r][1] == "GRANT";
        rec.predicted_permissions = canonical_permissions(
            permissions_of_class_name(rows[r][2].empty() ? "DENY" : rows[r][2]));
        const auto& truth = log.entries[idx].truth;
        if (truth) {
            rec.truth_grant = truth->decision == Decision::Grant;
            rec.truth_permissions = canonical_permissions(truth->permissions);
        }
        records.push_back(std::move(rec));
    }
    MetricsReport report = compute_metrics(score(records, strict));
    std::vector<BenchCell> cells = {{"-", "-", report}};
    if (!out_base.empty()) {
        csv::write_file(out_base + ".csv", metrics_csv(cells));
        csv::write_file(out_base + ".txt", metrics_table(cells));
    }
    std::cout << metrics_table(cells);
    return 0;
}

int cmd_bench(const std::string& tmpl_name, std::uint64_t seed, bool full_scale,
              const NegativeFlags& neg, const std::string& out_dir,
              std::vector<std::string> learners, std::vector<std::string> strategies,
              bool save_models) {
    if (learners.empty()) learners = {"dt", "rf", "et", "gb"};
    if (strategies.empty()) strategies = {"naive", "arfe", "avc", "arfe+avc"};

    SchemaTemplate tmpl = template_by_name(tmpl_name, seed, full_scale);
    SynthesizedDataset data = synthesize(tmpl);
    fs::create_directories(out_dir);
    if (save_models) fs::create_directories(out_dir + "/models");

    std::vector<BenchCell> cells;
    std::string timings = "strategy,learner,train_ms,infer_ms\n";
    for (const std::string& strategy : strategies) {
        EncoderConfig config =
            io::make_encoder_config(strategy, data.clusters, data.policy.catalog);
        for (const std::string& learner : learners) {
            LearnerSpec spec = LearnerSpec::defaults(learner_kind_from_string(learner), seed);
            InferenceRun run = solve_abac_pip(data.policy, data.log, spec, config,
                                              neg.negmode(seed));
            if (!run.metrics)
                raise(ErrorClass::MissingTruth, "bench log carries no truth labels");
            cells.push_back({strategy, learner, *run.metrics});
            timings += strategy + ',' + learner + ',' + std::to_string(run.train_ms) +
                       ',' + std::to_string(run.infer_ms) + '\n';
            if (save_models)
                save_model(*run.model,
                           out_dir + "/models/" + strategy + "-" + learner + ".model");
        }
    }
    csv::write_file(out_dir + "/results.csv", metrics_csv(cells));
    csv::write_file(out_dir + "/results.txt", metrics_table(cells));
    csv::write_file(out_dir + "/timings.csv", timings);
    std::cout << metrics_table(cells);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"PAMMELA: ABAC policy inference via supervised learning"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "synthesize a dataset from a template");
    std::string tmpl = "university1", tmpl_config, out_dir = "out";
    std::uint64_t seed = 0;
    bool full_scale = false;
    synth->add_option("--template", tmpl, "university1 | university2 | company");
    synth->add_option("--config", tmpl_config, "template key=value config file");
    synth->add_option("--seed", seed, "generation seed");
    synth->add_flag("--full-scale", full_scale, "full-scale university2 generation");
    synth->add_option("--out", out_dir, "output directory")->required();

    // train
    auto* train_cmd = app.add_subcommand("train", "train a model from a policy");
    DataFlags train_data;
    LearnerFlags train_learner;
    NegativeFlags train_neg;
    std::string train_model, train_encoded;
    train_data.attach(train_cmd, /*with_log=*/false);
    train_learner.attach(train_cmd);
    train_neg.attach(train_cmd);
    train_cmd->add_option("--model", train_model, "model output path")->required();
    train_cmd->add_option("--export-encoded", train_encoded, "encoded dataset CSV");

    // infer / augment / adapt
    auto* infer_cmd = app.add_subcommand("infer", "classify a request log");
    auto* augment_cmd = app.add_subcommand("augment", "infer and write the augmented policy");
    auto* adapt_cmd = app.add_subcommand("adapt", "build a target policy from a reference");
    DataFlags infer_data, augment_data, adapt_data;
    LearnerFlags infer_learner, augment_learner, adapt_learner;
    NegativeFlags infer_neg, augment_neg, adapt_neg;
    std::string infer_model, infer_out, infer_metrics;
    std::string augment_out_policy, augment_out, augment_out_catalog;
    std::string adapt_out_policy, adapt_out_catalog, adapt_additions;

    infer_data.attach(infer_cmd);
    infer_learner.attach(infer_cmd);
    infer_neg.attach(infer_cmd);
    infer_cmd->add_option("--model", infer_model,
                          "model file (reused if present, else written)");
    infer_cmd->add_option("--out", infer_out, "decision report CSV")->required();
    infer_cmd->add_option("--metrics", infer_metrics, "metrics output base path");

    augment_data.attach(augment_cmd);
    augment_learner.attach(augment_cmd);
    augment_neg.attach(augment_cmd);
    augment_cmd->add_option("--out-policy", augment_out_policy, "augmented policy CSV")
        ->required();
    augment_cmd->add_option("--out-catalog", augment_out_catalog,
                            "extended catalog CSV for the augmented policy");
    augment_cmd->add_option("--out", augment_out, "decision report CSV");

    adapt_data.attach(adapt_cmd);
    adapt_learner.attach(adapt_cmd);
    adapt_neg.attach(adapt_cmd);
    adapt_cmd->add_option("--additions", adapt_additions,
                          "catalog-format CSV of target attribute values");
    adapt_cmd->add_option("--out-policy", adapt_out_policy, "target policy CSV")->required();
    adapt_cmd->add_option("--out-catalog", adapt_out_catalog, "target catalog CSV");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "score a decision report against truth");
    std::string eval_report, eval_log, eval_catalog, eval_out;
    bool eval_strict = false;
    eval_cmd->add_option("--report", eval_report)->required();
    eval_cmd->add_option("--log", eval_log)->required();
    eval_cmd->add_option("--catalog", eval_catalog)->required();
    eval_cmd->add_flag("--strict-metrics", eval_strict,
                       "require exact permission-set matches for TPA");
    eval_cmd->add_option("--out", eval_out, "metrics output base path");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "strategy x learner comparison grid");
    std::string bench_tmpl = "university1", bench_out = "bench";
    std::uint64_t bench_seed = 0;
    bool bench_full = false, bench_save_models = false;
    NegativeFlags bench_neg;
    std::vector<std::string> bench_learners, bench_strategies;
    bench_cmd->add_option("--template", bench_tmpl, "university1 | university2 | company");
    bench_cmd->add_option("--seed", bench_seed, "seed for all randomness");
    bench_cmd->add_flag("--full-scale", bench_full);
    bench_neg.attach(bench_cmd);
    bench_cmd->add_option("--out", bench_out, "output directory")->required();
    bench_cmd->add_option("--learners", bench_learners, "subset of dt,rf,et,gb")
        ->delimiter(',');
    bench_cmd->add_option("--strategies", bench_strategies,
                          "subset of naive,arfe,avc,arfe+avc")
        ->delimiter(',');
    bench_cmd->add_flag("--save-models", bench_save_models, "write per-cell model files");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed())
            return cmd_synth(tmpl, tmpl_config, seed, full_scale, out_dir);
        if (train_cmd->parsed())
            return cmd_train(train_data, train_learner, train_neg, train_model,
                             train_encoded);
        if (infer_cmd->parsed())
            return cmd_infer(infer_data, infer_learner, infer_neg, infer_model, infer_out,
                             infer_metrics, "", "", false, "");
        if (augment_cmd->parsed())
            return cmd_infer(augment_data, augment_learner, augment_neg, "", augment_out,
                             "", augment_out_policy, augment_out_catalog, false, "");
        if (adapt_cmd->parsed())
            return cmd_infer(adapt_data, adapt_learner, adapt_neg, "", "", "",
                             adapt_out_policy, adapt_out_catalog, true, adapt_additions);
        if (eval_cmd->parsed())
            return cmd_eval(eval_report, eval_log, eval_catalog, eval_strict, eval_out);
        if (bench_cmd->parsed())
            return cmd_bench(bench_tmpl, bench_seed, bench_full, bench_neg, bench_out,
                             bench_learners, bench_strategies, bench_save_models);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
