#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pammela/abac.hpp"
#include "pammela/encoding.hpp"
#include "pammela/learners.hpp"
#include "pammela/metrics.hpp"

namespace pammela {

enum class SkipReason { AlreadyCovered };

const char* to_string(SkipReason r);

struct InferenceDecision {
    std::size_t request_index = 0;
    AccessRequest request;
    Decision verdict = Decision::Deny;
    std::vector<std::string> permissions; // non-empty iff Grant
    double confidence = 0.0;              // probability of the chosen class
};

struct SkippedRequest {
    std::size_t request_index = 0;
    AccessRequest request;
    SkipReason reason = SkipReason::AlreadyCovered;
};

struct InferenceRun {
    std::shared_ptr<const TrainedModel> model;
    Encoder encoder; // carries the extended working catalog
    std::vector<InferenceDecision> decisions;
    std::vector<SkippedRequest> skipped;
    std::vector<Rule> emitted_rules; // deduplicated, concrete
    std::optional<MetricsReport> metrics; // present when the log carried truth
    long long train_ms = 0;
    long long infer_ms = 0;
};

// The ABAC-PIP pipeline: ground -> derive negatives -> encode -> train, then
// classify each log entry. Requests already covered by the grounded policy are
// skipped (AlreadyCovered) instead of predicted; the rest are encoded against
// the extended catalog and answered with a verdict, permissions and
// confidence. Emitted rules are the concrete Grant/Deny rules the decisions
// induce. Truth labels, when present, yield a MetricsReport and never
// influence predictions.
InferenceRun solve_abac_pip(const Policy& policy, const RequestLog& log,
                            const LearnerSpec& spec, const EncoderConfig& config,
                            const NegativeMode& neg_mode = {});

// The classification half of the pipeline over an already-trained model (the
// model's catalog hash must match the policy's catalog). Declared additions
// extend the catalog ahead of the log-driven extension.
InferenceRun classify_requests(const Policy& policy, const RequestLog& log,
                               std::shared_ptr<const TrainedModel> model,
                               const EncoderConfig& config,
                               const std::vector<CatalogAddition>& declared_additions = {});

// Original rules plus the run's emitted rules over the run's (extended)
// catalog; exact duplicates are dropped, conflicts raise ConsistencyViolation.
// The input policy is not modified.
Policy augment_policy(const Policy& policy, const InferenceRun& run);

// Trains on the reference policy, classifies the target organization's log
// over the reference catalog extended with `additions`, and returns a fresh
// policy holding only the emitted rules.
Policy adapt_policy(const Policy& reference, const RequestLog& target_log,
                    const std::vector<CatalogAddition>& additions,
                    const LearnerSpec& spec, const EncoderConfig& config,
                    const NegativeMode& neg_mode = {});

// Decision records (for metrics::score) from a run's labeled decisions.
std::vector<DecisionRecord> labeled_records(const InferenceRun& run);

// CSV lines `request-id,verdict,permissions,confidence,skipped-reason`.
std::string run_report_csv(const InferenceRun& run);

} // namespace pammela
