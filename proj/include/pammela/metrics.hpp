#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pammela/errors.hpp"

namespace pammela {

// Exact rational in lowest terms; metrics are rounded only at report time.
struct Ratio {
    long long num = 0;
    long long den = 1;

    static Ratio of(long long num, long long den);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Ratio&) const = default;
};

std::string format_fixed(const Ratio& r, int decimals = 3);

struct ConfusionCounts {
    long long tpa = 0; // positive request, output YES
    long long tna = 0; // negative request, output NO
    long long fpa = 0; // negative request, output YES (security breach)
    long long fna = 0; // positive request, output NO (over-restriction)

    long long total() const { return tpa + tna + fpa + fna; }
};

struct MetricsReport {
    ConfusionCounts counts;
    Ratio accuracy;
    Ratio precision;
    Ratio recall;
    Ratio f1;
    // Division-by-zero arms yield 0 with the flag set.
    bool precision_zero_division = false;
    bool recall_zero_division = false;
    bool f1_zero_division = false;
};

struct DecisionRecord {
    bool predicted_grant = false;
    std::vector<std::string> predicted_permissions;
    std::optional<bool> truth_grant;
    std::vector<std::string> truth_permissions;
};

// Partitions labeled decisions into the four cells. Grant counts as positive
// regardless of permission-set identity unless `strict`; in strict mode a
// Grant with the wrong permission set on a positive request scores as FNA
// (the required access was not authorized). Errors with MissingTruth when a
// record lacks a truth label.
ConfusionCounts score(const std::vector<DecisionRecord>& records, bool strict = false);

// accuracy=(tpa+tna)/total, precision=tpa/(tpa+fpa), recall=tpa/(tpa+fna),
// f1=2PR/(P+R); all exact rationals. Errors with EmptyCounts on total==0.
MetricsReport compute_metrics(const ConfusionCounts& counts);

// ── Report rendering ─────────────────────────────────────────────────────────

struct BenchCell {
    std::string strategy;
    std::string learner;
    MetricsReport report;
};

std::string metrics_csv(const std::vector<BenchCell>& cells);
// Aligned table, classifiers as rows and strategies as column groups.
std::string metrics_table(const std::vector<BenchCell>& cells);

} // namespace pammela
