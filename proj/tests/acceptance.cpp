// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unistd.h>

#include "pammela/datagen.hpp"
#include "pammela/inference.hpp"
#include "pammela/io.hpp"
#include "pammela/random.hpp"

using namespace pammela;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start)
               .count() /
           1000.0;
}

void report(const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] %-22s %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

AttributeCatalog random_catalog(Rng& rng, int min_attrs, int max_attrs, int max_values) {
    int n_attrs = min_attrs +
                  static_cast<int>(rng.below(static_cast<std::uint64_t>(max_attrs - min_attrs + 1)));
    std::vector<AttributeDef> defs;
    for (int a = 0; a < n_attrs; ++a) {
        int nv = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_values)));
        std::vector<std::string> values;
        for (int v = 0; v < nv; ++v)
            values.push_back("v" + std::to_string(a) + "_" + std::to_string(v));
        defs.push_back({"A" + std::to_string(a),
                        a % 2 ? Category::Object : Category::Subject, values});
    }
    return AttributeCatalog::from_defs(std::move(defs));
}

Policy random_positive_policy(Rng& rng, const AttributeCatalog& catalog,
                              std::size_t max_rules, bool multiclass) {
    std::set<Tuple> tuples;
    std::size_t target = 1 + rng.below(max_rules);
    for (std::size_t i = 0; i < target * 3 && tuples.size() < target; ++i) {
        Tuple t(catalog.size());
        for (std::size_t a = 0; a < catalog.size(); ++a)
            t[a] = static_cast<std::int32_t>(
                rng.below(static_cast<std::uint64_t>(catalog.value_count(a)) + 1));
        tuples.insert(std::move(t));
    }
    Policy p;
    p.catalog = catalog;
    p.permission_universe = {"read", "write"};
    for (const Tuple& t : tuples) {
        Rule r;
        r.decision = Decision::Grant;
        r.permissions = multiclass && rng.below(3) == 0
                            ? std::vector<std::string>{"read", "write"}
                            : std::vector<std::string>{"read"};
        for (std::int32_t c : t)
            r.conditions.push_back(c == 0 ? Value::na() : Value::named(c));
        p.rules.push_back(std::move(r));
    }
    return p;
}

// ── Criterion 1: exhaustive complement equals brute-force set difference ────

void complement_oracle() {
    auto start = Clock::now();
    Rng rng(0xC0FFEE);
    int checked = 0;
    bool ok = true;
    while (checked < 100) {
        AttributeCatalog catalog = random_catalog(rng, 2, 4, 8);
        if (universe_size(catalog) > 10000) continue;
        Policy policy = random_positive_policy(rng, catalog, 12, false);

        std::set<Tuple> positives;
        for (const Rule& r : ground_rules(policy)) positives.insert(tuple_of(r));

        // Brute force: mixed-radix enumeration independent of the library path.
        std::set<Tuple> expected;
        Tuple t(catalog.size(), 0);
        for (;;) {
            if (!positives.count(t)) expected.insert(t);
            std::size_t i = catalog.size();
            for (; i-- > 0;) {
                if (t[i] < catalog.value_count(i)) {
                    ++t[i];
                    std::fill(t.begin() + static_cast<std::ptrdiff_t>(i) + 1, t.end(), 0);
                    break;
                }
            }
            if (i == static_cast<std::size_t>(-1)) break;
        }
        if (expected.empty()) continue;

        std::set<Tuple> got;
        for (const Rule& r : derive_negative_rules(policy, NegativeMode::exhaustive()))
            got.insert(tuple_of(r));
        if (got != expected) { ok = false; break; }
        ++checked;
    }
    double secs = seconds_since(start);
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "%d catalogs, exhaustive == brute-force U \\ PR exactly, %.1f s (< 10 s)",
                  checked, secs);
    report("complement-oracle", ok && checked >= 100 && secs < 10.0, detail);
}

// ── Criterion 2: unpruned decision tree memorizes consistent datasets ───────

void memorization_oracle() {
    auto start = Clock::now();
    Rng rng(0xBEEF);
    int checked = 0;
    std::size_t rows_total = 0;
    bool ok = true;
    while (checked < 50) {
        AttributeCatalog catalog = random_catalog(rng, 3, 5, 5);
        Policy policy = random_positive_policy(rng, catalog, 800, true);
        std::vector<Rule> training = ground_rules(policy);
        std::size_t n_pos = training.size();
        if (static_cast<std::uint64_t>(n_pos) == universe_size(catalog)) continue;
        for (Rule& r : derive_negative_rules(
                 policy, NegativeMode::sampled(2.0, 1000 + static_cast<std::uint64_t>(checked))))
            training.push_back(std::move(r));
        if (training.size() > 5000 || training.size() == n_pos) continue;

        Encoder enc = fit_encoder(catalog, EncoderConfig{});
        EncodedDataset data = encode_dataset(enc, training);
        TrainedModel model =
            train(LearnerSpec::defaults(LearnerSpec::Kind::DecisionTree), data);

        std::map<std::vector<std::int32_t>, std::int32_t> oracle;
        for (const FeatureRow& r : data.rows) oracle.emplace(r.features, r.label);
        for (const FeatureRow& r : data.rows) {
            if (predict(model, r.features).klass != oracle.at(r.features)) {
                ok = false;
                break;
            }
        }
        if (!ok) break;
        rows_total += data.rows.size();
        ++checked;
    }
    double secs = seconds_since(start);
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "%d policies (%zu rows), tree == lookup table on 100%%, %.1f s (< 60 s)",
                  checked, rows_total, secs);
    report("memorization-oracle", ok && checked >= 50 && secs < 60.0, detail);
}

// ── Criterion 3: metrics match an independent rational evaluation ───────────

void metric_arithmetic() {
    Rng rng(0xAB) ;
    bool ok = true;
    auto gcd_pair = [](long long a, long long b) {
        while (b) { long long t = a % b; a = b; b = t; }
        return a < 0 ? -a : a;
    };
    auto reduced_equal = [&](const Ratio& r, long long num, long long den) {
        if (den == 0) return false;
        long long g = gcd_pair(num, den);
        if (g == 0) g = 1;
        return r.num == num / g && r.den == den / g;
    };
    for (int i = 0; i < 1000 && ok; ++i) {
        long long tpa = static_cast<long long>(rng.below(1000000));
        long long tna = static_cast<long long>(rng.below(1000000));
        long long fpa = static_cast<long long>(rng.below(1000000));
        long long fna = static_cast<long long>(rng.below(1000000));
        long long total = tpa + tna + fpa + fna;
        if (total == 0) continue;
        MetricsReport r = compute_metrics({tpa, tna, fpa, fna});

        ok = ok && reduced_equal(r.accuracy, tpa + tna, total);
        if (tpa + fpa > 0) ok = ok && reduced_equal(r.precision, tpa, tpa + fpa);
        else ok = ok && r.precision_zero_division && r.precision.num == 0;
        if (tpa + fna > 0) ok = ok && reduced_equal(r.recall, tpa, tpa + fna);
        else ok = ok && r.recall_zero_division && r.recall.num == 0;
        if (tpa > 0) ok = ok && reduced_equal(r.f1, 2 * tpa, 2 * tpa + fpa + fna);
        else ok = ok && r.f1.num == 0;
    }
    report("metric-arithmetic", ok,
           "1000 random confusion counts, exact rational agreement before rounding");
}

// ── Criterion 4: augmentation closes the pipeline over every dataset ────────

void pipeline_closure() {
    auto start = Clock::now();
    bool ok = true;
    std::string detail;
    LearnerSpec spec = LearnerSpec::defaults(LearnerSpec::Kind::DecisionTree, 5);
    for (const auto& [name, seed] : std::vector<std::pair<std::string, std::uint64_t>>{
             {"university1", 11}, {"university2", 12}, {"company", 13}}) {
        SchemaTemplate tmpl = template_by_name(name, seed, false);
        SynthesizedDataset data = synthesize(tmpl);
        EncoderConfig config =
            io::make_encoder_config("arfe+avc", data.clusters, data.policy.catalog);
        InferenceRun run = solve_abac_pip(data.policy, data.log, spec, config,
                                          NegativeMode::sampled(2.0, seed));
        Policy augmented = augment_policy(data.policy, run);
        EncoderConfig config2 =
            io::make_encoder_config("arfe+avc", data.clusters, augmented.catalog);
        InferenceRun again = solve_abac_pip(augmented, data.log, spec, config2,
                                            NegativeMode::sampled(2.0, seed));
        bool closed = again.decisions.empty() &&
                      again.skipped.size() == data.log.entries.size();
        detail += name + (closed ? " closed; " : " NOT closed; ");
        ok = ok && closed;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f s", seconds_since(start));
    report("pipeline-closure", ok, detail + buf);
}

// ── Criterion 5: enhanced encodings beat the naive one on university1 ───────

void directional_f1() {
    auto start = Clock::now();
    std::vector<std::string> learners = {"dt", "rf", "et", "gb"};
    std::map<std::string, std::vector<double>> f1_naive, f1_best;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SynthesizedDataset data = synthesize(university1_template(seed));
        for (const std::string& learner : learners) {
            for (bool enhanced : {false, true}) {
                EncoderConfig config = io::make_encoder_config(
                    enhanced ? "arfe+avc" : "naive", data.clusters, data.policy.catalog);
                LearnerSpec spec =
                    LearnerSpec::defaults(learner_kind_from_string(learner), seed);
                InferenceRun run = solve_abac_pip(data.policy, data.log, spec, config,
                                                  NegativeMode::sampled(2.0, seed));
                double f1 = run.metrics->f1.value();
                (enhanced ? f1_best : f1_naive)[learner].push_back(f1);
            }
        }
    }
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return v[v.size() / 2];
    };
    bool ok = true;
    std::string detail;
    for (const std::string& learner : learners) {
        double naive = median(f1_naive[learner]);
        double best = median(f1_best[learner]);
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s %.3f>=%.3f ", learner.c_str(), best, naive);
        detail += buf;
        ok = ok && best >= naive;
    }
    double dt_best = median(f1_best["dt"]);
    char buf[96];
    double secs = seconds_since(start);
    std::snprintf(buf, sizeof buf, "; dt arfe+avc %.3f >= 0.95; %.0f s (< 300 s)",
                  dt_best, secs);
    report("directional-f1", ok && dt_best >= 0.95 && secs < 300.0, detail + buf);
}

// ── Criterion 6: encoding invariants on randomized catalogs ─────────────────

void encoding_invariants() {
    auto start = Clock::now();
    Rng rng(0x5EED);
    bool ok = true;
    int cases = 0;
    for (int iter = 0; iter < 1000 && ok; ++iter, ++cases) {
        int n_subj = 1 + static_cast<int>(rng.below(3));
        int n_obj = 1 + static_cast<int>(rng.below(3));
        std::vector<AttributeDef> defs;
        for (int a = 0; a < n_subj + n_obj; ++a) {
            int nv = 1 + static_cast<int>(rng.below(6));
            std::vector<std::string> values;
            for (int v = 0; v < nv; ++v) values.push_back("w" + std::to_string(v));
            defs.push_back({"N" + std::to_string(a < n_subj ? a : a - n_subj),
                            a < n_subj ? Category::Subject : Category::Object, values});
        }
        AttributeCatalog cat = AttributeCatalog::from_defs(defs);

        std::vector<ClusterAssignment> clusters;
        std::size_t n_clustered = 0;
        for (std::size_t a = 0; a < cat.size(); ++a) {
            if (rng.below(2) == 0) continue;
            ++n_clustered;
            for (std::int32_t c = 1; c <= cat.value_count(a); ++c)
                clusters.push_back({cat.attribute(a).category, cat.attribute(a).name,
                                    cat.value_name(a, c),
                                    "g" + std::to_string(rng.below(3))});
        }
        Encoder enc = fit_encoder(cat, {true, true, clusters, {}});

        std::size_t common = static_cast<std::size_t>(std::min(n_subj, n_obj));
        ok = ok && enc.n_features() == cat.size() + common + n_clustered;

        for (std::size_t a = 0; a < cat.size() && ok; ++a) {
            std::set<std::int32_t> codes;
            ok = ok && enc.encoded_code(a, 0) == 0;
            for (std::int32_t c = 0; c <= cat.value_count(a); ++c) {
                std::int32_t e = enc.encoded_code(a, c);
                ok = ok && e >= 0 && e <= cat.value_count(a) && codes.insert(e).second &&
                     enc.canonical_code(a, e) == c;
            }
            if (!enc.attribute_clustered(a)) continue;
            std::map<std::int32_t, std::set<std::int32_t>> members;
            for (std::int32_t c = 1; c <= cat.value_count(a); ++c)
                members[enc.cluster_code(a, c)].insert(enc.encoded_code(a, c));
            for (auto& [cl, span] : members)
                ok = ok && (*span.rbegin() - *span.begin() + 1) ==
                               static_cast<std::int32_t>(span.size());
        }

        // ARFE symmetry on a random assignment.
        std::vector<Value> row;
        for (std::size_t a = 0; a < cat.size(); ++a) {
            auto c = static_cast<std::int32_t>(
                rng.below(static_cast<std::uint64_t>(cat.value_count(a)) + 1));
            row.push_back(c == 0 ? Value::na() : Value::named(c));
        }
        auto coded = enc.encode_row(row);
        for (std::size_t p = 0; p < enc.arfe_pairs().size() && ok; ++p) {
            auto [s, o] = enc.arfe_pairs()[p];
            auto s_new = cat.try_code(s, cat.value_name(o, row[o].code()));
            auto o_new = cat.try_code(o, cat.value_name(s, row[s].code()));
            if (!s_new || !o_new) continue;
            std::vector<Value> swapped = row;
            swapped[s] = *s_new == 0 ? Value::na() : Value::named(*s_new);
            swapped[o] = *o_new == 0 ? Value::na() : Value::named(*o_new);
            auto swapped_coded = enc.encode_row(swapped);
            std::size_t col = n_clustered + p; // cluster columns lead, then ARFE
            ok = ok && coded[col] == swapped_coded[col];
        }
    }
    char detail[128];
    std::snprintf(detail, sizeof detail,
                  "%d randomized catalogs: counts, bijectivity, contiguity, symmetry (%.1f s)",
                  cases, seconds_since(start));
    report("encoding-invariants", ok && cases >= 1000, detail);
}

// ── Criterion 7: full-scale timing envelope ──────────────────────────────────

void timing_envelope() {
    SchemaTemplate tmpl = university2_template(3, /*full_scale=*/true);
    SynthesizedDataset data = synthesize(tmpl);
    std::vector<Rule> training = ground_rules(data.policy);
    std::size_t positives = training.size();
    for (Rule& r : sample_complement(data.policy, 156775 - positives, 3))
        training.push_back(std::move(r));

    EncoderConfig config =
        io::make_encoder_config("arfe+avc", data.clusters, data.policy.catalog);
    Encoder enc = fit_encoder(data.policy.catalog, config);
    EncodedDataset dataset = encode_dataset(enc, training);

    bool ok = dataset.rows.size() == 156775;
    std::string detail = "rows=" + std::to_string(dataset.rows.size()) + "; ";

    // 1,010 request rows, encoded against the log-extended catalog.
    Encoder ext = enc;
    {
        std::vector<CatalogAddition> additions;
        for (const CatalogAddition& a : tmpl.new_values) additions.push_back(a);
        ext = enc.extend(additions);
    }
    std::vector<std::vector<std::int32_t>> request_rows;
    for (std::size_t i = 0; request_rows.size() < 1010; ++i) {
        const RawRequest& raw = data.log.entries[i % data.log.entries.size()];
        request_rows.push_back(ext.encode_request(resolve_request(ext.catalog(), raw)));
    }

    for (const char* learner : {"dt", "rf", "et", "gb"}) {
        LearnerSpec spec = LearnerSpec::defaults(learner_kind_from_string(learner), 3);
        auto t0 = Clock::now();
        TrainedModel model = train(spec, dataset);
        double train_s = seconds_since(t0);

        auto t1 = Clock::now();
        std::size_t grants = 0;
        for (const auto& row : request_rows)
            grants += static_cast<std::size_t>(predict(model, row).klass != 0);
        double infer_s = seconds_since(t1);

        char buf[96];
        std::snprintf(buf, sizeof buf, "%s %.1fs/%.3fs ", learner, train_s, infer_s);
        detail += buf;
        ok = ok && train_s < 90.0 && infer_s < 1.0;
        (void)grants;
    }
    report("timing-envelope", ok, detail + "(train < 90 s, 1010 requests < 1 s)");
}

// ── Criterion 8: byte-identical bench reruns ─────────────────────────────────

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void determinism() {
    auto start = Clock::now();
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() /
                   ("pammela_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    std::string base = std::string(PAMMELA_CLI_PATH) +
                       " bench --template university1 --seed 5 --learners dt,rf,et,gb "
                       "--strategies naive,arfe+avc --save-models --out ";
    bool ok = true;
    for (const char* sub : {"a", "b"}) {
        std::string cmd = base + (dir / sub).string() + " >/dev/null 2>&1";
        ok = ok && std::system(cmd.c_str()) == 0;
    }
    ok = ok && slurp((dir / "a/results.csv").string()) ==
                   slurp((dir / "b/results.csv").string());
    ok = ok && slurp((dir / "a/results.txt").string()) ==
                   slurp((dir / "b/results.txt").string());
    int models = 0;
    if (ok) {
        for (const auto& entry : fs::directory_iterator(dir / "a/models")) {
            std::string name = entry.path().filename().string();
            std::string a = slurp(entry.path().string());
            std::string b = slurp((dir / "b/models" / name).string());
            ok = ok && !a.empty() && a == b;
            ++models;
        }
    }
    fs::remove_all(dir);
    char detail[128];
    std::snprintf(detail, sizeof detail,
                  "two bench runs: tables and %d serialized models byte-identical (%.0f s)",
                  models, seconds_since(start));
    report("determinism", ok && models == 8, detail);
}

} // namespace

int main() {
    std::printf("PAMMELA acceptance suite\n");
    complement_oracle();
    memorization_oracle();
    metric_arithmetic();
    pipeline_closure();
    directional_f1();
    encoding_invariants();
    timing_envelope();
    determinism();
    std::printf("%s (%d failure%s)\n", failures ? "FAILED" : "OK", failures,
                failures == 1 ? "" : "s");
    return failures;
}
