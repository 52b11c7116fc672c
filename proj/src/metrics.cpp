#include "pammela/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace pammela {

Ratio Ratio::of(long long num, long long den) {
    if (den == 0) raise(ErrorClass::EmptyCounts, "rational with zero denominator");
    if (den < 0) { num = -num; den = -den; }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
    return Ratio{num, den};
}

std::string format_fixed(const Ratio& r, int decimals) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, r.value());
    return buf;
}

ConfusionCounts score(const std::vector<DecisionRecord>& records, bool strict) {
    ConfusionCounts counts;
    for (const DecisionRecord& rec : records) {
        if (!rec.truth_grant)
            raise(ErrorClass::MissingTruth, "decision without a ground-truth label");
        bool truth = *rec.truth_grant;
        bool predicted = rec.predicted_grant;
        if (truth) {
            bool hit = predicted &&
                       (!strict || rec.predicted_permissions == rec.truth_permissions);
            if (hit) ++counts.tpa;
            else ++counts.fna;
        } else {
            if (predicted) ++counts.fpa;
            else ++counts.tna;
        }
    }
    return counts;
}

MetricsReport compute_metrics(const ConfusionCounts& counts) {
    long long total = counts.total();
    if (total <= 0) raise(ErrorClass::EmptyCounts, "no scored decisions");
    if (counts.tpa < 0 || counts.tna < 0 || counts.fpa < 0 || counts.fna < 0)
        raise(ErrorClass::EmptyCounts, "negative confusion cell");

    MetricsReport report;
    report.counts = counts;
    report.accuracy = Ratio::of(counts.tpa + counts.tna, total);

    if (counts.tpa + counts.fpa == 0) {
        report.precision = Ratio{0, 1};
        report.precision_zero_division = true;
    } else {
        report.precision = Ratio::of(counts.tpa, counts.tpa + counts.fpa);
    }
    if (counts.tpa + counts.fna == 0) {
        report.recall = Ratio{0, 1};
        report.recall_zero_division = true;
    } else {
        report.recall = Ratio::of(counts.tpa, counts.tpa + counts.fna);
    }
    if (report.precision.num == 0 && report.recall.num == 0) {
        report.f1 = Ratio{0, 1};
        report.f1_zero_division = true;
    } else {
        // 2PR/(P+R) reduces to 2*tpa / (2*tpa + fpa + fna), still exact.
        report.f1 = Ratio::of(2 * counts.tpa, 2 * counts.tpa + counts.fpa + counts.fna);
    }
    return report;
}

std::string metrics_csv(const std::vector<BenchCell>& cells) {
    std::string out = "strategy,learner,tpa,tna,fpa,fna,accuracy,precision,recall,f1\n";
    for (const BenchCell& c : cells) {
        out += c.strategy + ',' + c.learner + ',';
        out += std::to_string(c.report.counts.tpa) + ',';
        out += std::to_string(c.report.counts.tna) + ',';
        out += std::to_string(c.report.counts.fpa) + ',';
        out += std::to_string(c.report.counts.fna) + ',';
        out += format_fixed(c.report.accuracy) + ',';
        out += format_fixed(c.report.precision) + ',';
        out += format_fixed(c.report.recall) + ',';
        out += format_fixed(c.report.f1) + '\n';
    }
    return out;
}

std::string metrics_table(const std::vector<BenchCell>& cells) {
    std::vector<std::string> strategies, learners;
    for (const BenchCell& c : cells) {
        if (std::find(strategies.begin(), strategies.end(), c.strategy) == strategies.end())
            strategies.push_back(c.strategy);
        if (std::find(learners.begin(), learners.end(), c.learner) == learners.end())
            learners.push_back(c.learner);
    }
    auto cell = [&](const std::string& s, const std::string& l) -> const BenchCell* {
        for (const BenchCell& c : cells)
            if (c.strategy == s && c.learner == l) return &c;
        return nullptr;
    };

    std::ostringstream out;
    int group = 4 * 7 + 3;
    out << "Clfr  ";
    for (const std::string& s : strategies) {
        std::string header = s;
        if (static_cast<int>(header.size()) < group) {
            int pad = group - static_cast<int>(header.size());
            header = std::string(static_cast<std::size_t>(pad / 2), ' ') + header +
                     std::string(static_cast<std::size_t>(pad - pad / 2), ' ');
        }
        out << "| " << header << ' ';
    }
    out << "\n      ";
    for (std::size_t i = 0; i < strategies.size(); ++i)
        out << "|   Acc     Pr    Rec   F1-s  ";
    out << '\n';
    out << std::string(6 + strategies.size() * (static_cast<std::size_t>(group) + 3), '-')
        << '\n';
    for (const std::string& l : learners) {
        out << l << std::string(6 - std::min<std::size_t>(6, l.size()), ' ');
        for (const std::string& s : strategies) {
            const BenchCell* c = cell(s, l);
            if (!c) { out << "| " << std::string(static_cast<std::size_t>(group), ' ') << ' '; continue; }
            out << "| " << format_fixed(c->report.accuracy) << "  "
                << format_fixed(c->report.precision) << "  "
                << format_fixed(c->report.recall) << "  "
                << format_fixed(c->report.f1) << "  ";
        }
        out << '\n';
    }
    return out.str();
}

} // namespace pammela
