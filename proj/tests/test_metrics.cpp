#include <doctest.h>

#include "pammela/metrics.hpp"
#include "pammela/random.hpp"

using namespace pammela;

namespace {

DecisionRecord rec(bool truth, bool predicted) {
    DecisionRecord r;
    r.truth_grant = truth;
    r.predicted_grant = predicted;
    return r;
}

std::vector<DecisionRecord> bulk(long long tpa, long long tna, long long fpa,
                                 long long fna) {
    std::vector<DecisionRecord> records;
    for (long long i = 0; i < tpa; ++i) records.push_back(rec(true, true));
    for (long long i = 0; i < tna; ++i) records.push_back(rec(false, false));
    for (long long i = 0; i < fpa; ++i) records.push_back(rec(false, true));
    for (long long i = 0; i < fna; ++i) records.push_back(rec(true, false));
    return records;
}

} // namespace

TEST_CASE("score: the perfect classifier on 598 positives and 412 negatives") {
    ConfusionCounts c = score(bulk(598, 412, 0, 0));
    CHECK(c.tpa == 598);
    CHECK(c.tna == 412);
    CHECK(c.fpa == 0);
    CHECK(c.fna == 0);
    CHECK(c.total() == 1010);
}

TEST_CASE("score: everything inverted") {
    ConfusionCounts c = score(bulk(0, 0, 412, 598));
    CHECK(c.tpa == 0);
    CHECK(c.tna == 0);
    CHECK(c.fpa == 412);
    CHECK(c.fna == 598);
}

TEST_CASE("score: mixed six-decision set matches the hand table") {
    // truth:   +    +    -    -    +    -
    // output:  Y    N    Y    N    Y    N
    std::vector<DecisionRecord> records = {rec(true, true),  rec(true, false),
                                           rec(false, true), rec(false, false),
                                           rec(true, true),  rec(false, false)};
    ConfusionCounts c = score(records);
    CHECK(c.tpa == 2);
    CHECK(c.fna == 1);
    CHECK(c.fpa == 1);
    CHECK(c.tna == 2);
}

TEST_CASE("score: missing truth raises") {
    std::vector<DecisionRecord> records = {rec(true, true)};
    records.push_back({});
    try {
        score(records);
        FAIL("expected MissingTruth");
    } catch (const Error& e) {
        CHECK(e.cls() == ErrorClass::MissingTruth);
    }
}

TEST_CASE("score: strict mode requires matching permission sets for TPA") {
    DecisionRecord wrong = rec(true, true);
    wrong.truth_permissions = {"read", "write"};
    wrong.predicted_permissions = {"read"};
    DecisionRecord right = rec(true, true);
    right.truth_permissions = {"read"};
    right.predicted_permissions = {"read"};

    ConfusionCounts lax = score({wrong, right}, /*strict=*/false);
    CHECK(lax.tpa == 2);
    ConfusionCounts strict = score({wrong, right}, /*strict=*/true);
    CHECK(strict.tpa == 1);
    CHECK(strict.fna == 1);
}

TEST_CASE("compute_metrics: perfect two-by-two") {
    MetricsReport r = compute_metrics({1, 1, 0, 0});
    CHECK(r.accuracy == Ratio{1, 1});
    CHECK(r.precision == Ratio{1, 1});
    CHECK(r.recall == Ratio{1, 1});
    CHECK(r.f1 == Ratio{1, 1});
    CHECK_FALSE(r.precision_zero_division);
}

TEST_CASE("compute_metrics: zero-division arms yield flagged zeros") {
    MetricsReport r = compute_metrics({0, 10, 0, 5});
    CHECK(r.precision == Ratio{0, 1});
    CHECK(r.precision_zero_division);
    CHECK(r.recall == Ratio{0, 1});
    CHECK_FALSE(r.recall_zero_division); // tpa + fna > 0, recall is simply 0
    CHECK(r.f1 == Ratio{0, 1});
    CHECK(r.f1_zero_division);
    CHECK(r.accuracy == Ratio{2, 3});

    try {
        compute_metrics({0, 0, 0, 0});
        FAIL("expected EmptyCounts");
    } catch (const Error& e) {
        CHECK(e.cls() == ErrorClass::EmptyCounts);
    }
}

TEST_CASE("compute_metrics: exact rationals for the 598/370/42/0 cell") {
    MetricsReport r = compute_metrics({598, 370, 42, 0});
    CHECK(r.precision == Ratio{299, 320}); // 598/640
    CHECK(r.recall == Ratio{1, 1});
    CHECK(r.accuracy == Ratio{484, 505}); // 968/1010
    CHECK(r.f1 == Ratio{598, 619});       // 1196/1238
    CHECK(r.precision.value() == doctest::Approx(0.9344).epsilon(1e-4));
    CHECK(r.accuracy.value() == doctest::Approx(0.9584).epsilon(1e-4));
    CHECK(r.f1.value() == doctest::Approx(0.9661).epsilon(1e-4));
    CHECK(format_fixed(r.precision) == "0.934");
}

TEST_CASE("f1 sits between precision and recall when both positive") {
    Rng rng(8);
    for (int i = 0; i < 500; ++i) {
        ConfusionCounts c{static_cast<long long>(rng.below(500) + 1),
                          static_cast<long long>(rng.below(500)),
                          static_cast<long long>(rng.below(500)),
                          static_cast<long long>(rng.below(500))};
        MetricsReport r = compute_metrics(c);
        double lo = std::min(r.precision.value(), r.recall.value());
        double hi = std::max(r.precision.value(), r.recall.value());
        CHECK(r.f1.value() >= lo - 1e-12);
        CHECK(r.f1.value() <= hi + 1e-12);
    }
}

TEST_CASE("swapping truth and prediction polarity mirrors the cells") {
    Rng rng(9);
    for (int i = 0; i < 200; ++i) {
        long long tpa = static_cast<long long>(rng.below(100) + 1);
        long long tna = static_cast<long long>(rng.below(100) + 1);
        long long fpa = static_cast<long long>(rng.below(100));
        long long fna = static_cast<long long>(rng.below(100));
        ConfusionCounts swapped = {tna, tpa, fna, fpa};
        MetricsReport a = compute_metrics({tpa, tna, fpa, fna});
        MetricsReport b = compute_metrics(swapped);
        CHECK(a.accuracy == b.accuracy);
    }
}

TEST_CASE("bench table renders one row per classifier") {
    MetricsReport r = compute_metrics({1, 1, 0, 0});
    std::vector<BenchCell> cells = {{"naive", "dt", r}, {"arfe+avc", "dt", r}};
    std::string table = metrics_table(cells);
    CHECK(table.find("naive") != std::string::npos);
    CHECK(table.find("arfe+avc") != std::string::npos);
    CHECK(table.find("dt") != std::string::npos);
    std::string csv = metrics_csv(cells);
    CHECK(csv.find("strategy,learner,tpa") == 0);
    CHECK(csv.find("naive,dt,1,1,0,0,1.000,1.000,1.000,1.000") != std::string::npos);
}
