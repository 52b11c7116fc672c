#include "pammela/inference.hpp"

#include <algorithm>
#include <chrono>
#include <unordered_map>
#include <unordered_set>

namespace pammela {

const char* to_string(SkipReason r) {
    switch (r) {
        case SkipReason::AlreadyCovered: return "AlreadyCovered";
    }
    return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

long long ms_since(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start)
        .count();
}

// New (category, attribute, value) triples in log order of first appearance,
// so extension codes are reproducible.
std::vector<CatalogAddition> additions_from_log(const AttributeCatalog& catalog,
                                                const RequestLog& log) {
    std::vector<CatalogAddition> additions;
    std::unordered_set<std::string> seen;
    for (const RawRequest& raw : log.entries) {
        if (raw.values.size() != catalog.size())
            raise(ErrorClass::WidthMismatch, "log row width does not match catalog");
        for (std::size_t i = 0; i < raw.values.size(); ++i) {
            const std::string& v = raw.values[i];
            if (v == "Any")
                raise(ErrorClass::FormatError, "Any is not a valid request value");
            if (catalog.try_code(i, v)) continue;
            const AttributeDef& def = catalog.attribute(i);
            std::string key = catalog.label(i) + "\x1f" + v;
            if (seen.insert(key).second)
                additions.push_back({def.category, def.name, v, std::nullopt});
        }
    }
    return additions;
}

} // namespace

InferenceRun classify_requests(const Policy& policy, const RequestLog& log,
                               std::shared_ptr<const TrainedModel> model,
                               const EncoderConfig& config,
                               const std::vector<CatalogAddition>& declared_additions) {
    if (log.entries.empty()) raise(ErrorClass::EmptyLog, "request log is empty");
    if (model->catalog_hash != 0 && model->catalog_hash != policy.catalog.hash())
        raise(ErrorClass::FormatError,
              "model was trained against a different catalog");

    auto infer_start = Clock::now();
    InferenceRun run;
    run.model = std::move(model);
    Encoder encoder = fit_encoder(policy.catalog, config).extend(declared_additions);
    run.encoder = encoder.extend(additions_from_log(encoder.catalog(), log));

    GroundedIndex covered(ground_rules(policy));
    std::unordered_map<Tuple, std::size_t, TupleHash> emitted_index;

    for (std::size_t idx = 0; idx < log.entries.size(); ++idx) {
        AccessRequest request = resolve_request(run.encoder.catalog(), log.entries[idx]);
        Tuple t = tuple_of(request);
        if (covered.find(t)) {
            run.skipped.push_back({idx, std::move(request), SkipReason::AlreadyCovered});
            continue;
        }
        Prediction pred = predict(*run.model, run.encoder.encode_request(request));
        InferenceDecision decision;
        decision.request_index = idx;
        decision.verdict = pred.klass == 0 ? Decision::Deny : Decision::Grant;
        decision.permissions = permissions_of_class_name(
            run.model->class_names[static_cast<std::size_t>(pred.klass)]);
        decision.confidence = pred.probabilities[static_cast<std::size_t>(pred.klass)];
        decision.request = std::move(request);

        if (!emitted_index.count(t)) {
            Rule rule;
            rule.conditions = decision.request.assignments;
            rule.decision = decision.verdict;
            rule.permissions = decision.permissions;
            emitted_index.emplace(std::move(t), run.emitted_rules.size());
            run.emitted_rules.push_back(std::move(rule));
        }
        run.decisions.push_back(std::move(decision));
    }
    run.infer_ms = ms_since(infer_start);

    std::vector<DecisionRecord> records = labeled_records(run);
    if (!records.empty() && records.size() == run.decisions.size())
        run.metrics = compute_metrics(score(records));
    return run;
}

namespace {

InferenceRun solve_with_additions(const Policy& policy, const RequestLog& log,
                                  const LearnerSpec& spec, const EncoderConfig& config,
                                  const NegativeMode& neg_mode,
                                  const std::vector<CatalogAddition>& declared) {
    if (log.entries.empty()) raise(ErrorClass::EmptyLog, "request log is empty");

    auto train_start = Clock::now();
    std::vector<Rule> training = ground_rules(policy);
    {
        std::unordered_set<Tuple, TupleHash> seen;
        seen.reserve(training.size() * 2);
        for (const Rule& r : training) seen.insert(tuple_of(r));
        std::vector<Rule> negatives = derive_negative_rules(policy, neg_mode);
        for (Rule& r : negatives)
            if (seen.insert(tuple_of(r)).second) training.push_back(std::move(r));
    }

    Encoder encoder = fit_encoder(policy.catalog, config);
    EncodedDataset dataset = encode_dataset(encoder, training);

    TrainedModel model = train(spec, dataset);
    model.catalog_hash = policy.catalog.hash();
    long long train_ms = ms_since(train_start);

    InferenceRun run = classify_requests(policy, log,
                                         std::make_shared<TrainedModel>(std::move(model)),
                                         config, declared);
    run.train_ms = train_ms;
    return run;
}

} // namespace

InferenceRun solve_abac_pip(const Policy& policy, const RequestLog& log,
                            const LearnerSpec& spec, const EncoderConfig& config,
                            const NegativeMode& neg_mode) {
    return solve_with_additions(policy, log, spec, config, neg_mode, {});
}

std::vector<DecisionRecord> labeled_records(const InferenceRun& run) {
    std::vector<DecisionRecord> records;
    for (const InferenceDecision& d : run.decisions) {
        if (!d.request.truth) continue;
        DecisionRecord rec;
        rec.predicted_grant = d.verdict == Decision::Grant;
        rec.predicted_permissions = canonical_permissions(d.permissions);
        rec.truth_grant = d.request.truth->decision == Decision::Grant;
        rec.truth_permissions = canonical_permissions(d.request.truth->permissions);
        records.push_back(std::move(rec));
    }
    return records;
}

Policy augment_policy(const Policy& policy, const InferenceRun& run) {
    Policy out;
    out.catalog = run.encoder.catalog();
    out.rules = policy.rules;
    out.permission_universe = policy.permission_universe;

    std::unordered_set<std::string> universe(out.permission_universe.begin(),
                                             out.permission_universe.end());
    for (const Rule& r : run.emitted_rules) {
        bool duplicate = false;
        for (const Rule& existing : out.rules)
            if (existing == r) { duplicate = true; break; }
        if (duplicate) continue;
        out.rules.push_back(r);
        for (const std::string& p : r.permissions)
            if (universe.insert(p).second) out.permission_universe.push_back(p);
    }
    out.validate(); // ConsistencyViolation on any emitted/existing conflict
    return out;
}

Policy adapt_policy(const Policy& reference, const RequestLog& target_log,
                    const std::vector<CatalogAddition>& additions,
                    const LearnerSpec& spec, const EncoderConfig& config,
                    const NegativeMode& neg_mode) {
    // Training stays on the reference organization's catalog; the declared
    // additions (plus anything the log introduces) extend the encoder only for
    // classification, so derived negatives never cover the target's new values.
    InferenceRun run =
        solve_with_additions(reference, target_log, spec, config, neg_mode, additions);

    Policy target;
    target.catalog = run.encoder.catalog();
    target.rules = run.emitted_rules;
    target.permission_universe = reference.permission_universe;
    target.validate();
    return target;
}

std::string run_report_csv(const InferenceRun& run) {
    std::size_t total = run.decisions.size() + run.skipped.size();
    std::vector<std::string> lines(total);
    char buf[32];
    for (const InferenceDecision& d : run.decisions) {
        std::snprintf(buf, sizeof buf, "%.6f", d.confidence);
        lines[d.request_index] = std::to_string(d.request_index) + ',' +
                                 (d.verdict == Decision::Grant ? "GRANT" : "DENY") + ',' +
                                 permissions_label(d.permissions) + ',' + buf + ',';
    }
    for (const SkippedRequest& s : run.skipped)
        lines[s.request_index] =
            std::to_string(s.request_index) + ",,,," + to_string(s.reason);

    std::string out = "request-id,verdict,permissions,confidence,skipped-reason\n";
    for (const std::string& line : lines) {
        out += line;
        out += '\n';
    }
    return out;
}

} // namespace pammela
