#include <doctest.h>

#include <algorithm>
#include <set>
#include <unordered_set>

#include "helpers.hpp"
#include "pammela/abac.hpp"
#include "pammela/random.hpp"

using namespace pammela;
using namespace pammela::testing;

namespace {

std::set<Tuple> tuple_set(const std::vector<Rule>& rules) {
    std::set<Tuple> out;
    for (const Rule& r : rules) out.insert(tuple_of(r));
    return out;
}

// Random positive-only policy over a random small catalog.
Policy random_policy(Rng& rng, int max_attrs = 4, int max_values = 6) {
    int n_attrs = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_attrs - 1)));
    std::vector<AttributeDef> defs;
    for (int a = 0; a < n_attrs; ++a) {
        int n_values = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_values)));
        std::vector<std::string> values;
        for (int v = 0; v < n_values; ++v)
            values.push_back("a" + std::to_string(a) + "v" + std::to_string(v));
        defs.push_back({"Attr" + std::to_string(a),
                        a % 2 ? Category::Object : Category::Subject, values});
    }
    AttributeCatalog catalog = AttributeCatalog::from_defs(std::move(defs));

    std::size_t n_rules = 1 + rng.below(6);
    std::set<Tuple> seen;
    std::vector<Rule> rules;
    while (rules.size() < n_rules) {
        Rule r;
        r.decision = Decision::Grant;
        r.permissions = {"read"};
        for (std::size_t a = 0; a < catalog.size(); ++a) {
            std::uint64_t pick = rng.below(static_cast<std::uint64_t>(catalog.value_count(a)) + 2);
            if (pick == 0 && rng.below(4) == 0) {
                r.conditions.push_back(Value::any());
            } else {
                auto code = static_cast<std::int32_t>(
                    rng.below(static_cast<std::uint64_t>(catalog.value_count(a)) + 1));
                r.conditions.push_back(code == 0 ? Value::na() : Value::named(code));
            }
        }
        rules.push_back(std::move(r));
        Policy probe = make_policy(catalog, rules);
        try {
            auto grounded = ground_rules(probe);
            (void)grounded;
        } catch (const Error&) {
            rules.pop_back(); // up to permission mismatch on a shared tuple
        }
    }
    return make_policy(std::move(catalog), std::move(rules));
}

} // namespace

TEST_CASE("catalog rejects reserved and duplicate names") {
    CHECK_THROWS_AS(AttributeCatalog::from_defs(
                        {{"A", Category::Subject, {"x", "NA"}}}),
                    Error);
    CHECK_THROWS_AS(AttributeCatalog::from_defs(
                        {{"A", Category::Subject, {"x", "x"}}}),
                    Error);
    CHECK_THROWS_AS(AttributeCatalog::from_defs({{"A", Category::Subject, {"x"}},
                                                 {"A", Category::Subject, {"y"}}}),
                    Error);
    // Same name across categories is allowed (Department as subject and object).
    CHECK_NOTHROW(dept_pair_catalog());
}

TEST_CASE("catalog codes are 1..n in order, NA is 0, extension appends") {
    AttributeCatalog cat = dept_pair_catalog({"CS", "EE", "ME", "CE"});
    CHECK(cat.code(0, "CS") == 1);
    CHECK(cat.code(0, "CE") == 4);
    CHECK(cat.code(0, "NA") == 0);
    CHECK_THROWS_AS(cat.code(0, "IT"), Error);

    AttributeCatalog ext = cat.with_added_value(0, "IT");
    CHECK(ext.code(0, "IT") == 5);
    CHECK(ext.code(0, "CS") == 1);
    CHECK(cat.hash() != ext.hash());
    CHECK_THROWS_AS(ext.with_added_value(0, "IT"), Error);
}

TEST_CASE("grounding: identity for concrete rules") {
    AttributeCatalog cat = dept_pair_catalog();
    Policy p = make_policy(cat, {grant_rule({Value::named(1), Value::named(1)})});
    auto grounded = ground_rules(p);
    REQUIRE(grounded.size() == 1);
    CHECK(grounded[0] == p.rules[0]);
}

TEST_CASE("grounding: Any over {CS, EE} expands to two rules") {
    AttributeCatalog cat = dept_pair_catalog();
    Policy p = make_policy(cat, {grant_rule({Value::any(), Value::named(2)})});
    auto grounded = ground_rules(p);
    REQUIRE(grounded.size() == 2);
    CHECK(tuple_set(grounded) == std::set<Tuple>{{1, 2}, {2, 2}});
    for (const Rule& r : grounded) {
        CHECK(r.decision == Decision::Grant);
        CHECK(r.permissions == std::vector<std::string>{"read"});
    }
}

TEST_CASE("grounding: three rules with independent 2x3 wildcards give 18") {
    AttributeCatalog cat = AttributeCatalog::from_defs({
        {"A", Category::Subject, {"a1", "a2"}},
        {"B", Category::Object, {"b1", "b2", "b3"}},
        {"C", Category::Object, {"c1", "c2", "c3"}},
    });
    std::vector<Rule> rules;
    for (std::int32_t c = 1; c <= 3; ++c)
        rules.push_back(grant_rule({Value::any(), Value::any(), Value::named(c)}));
    Policy p = make_policy(cat, rules);
    auto grounded = ground_rules(p);

    // Brute-force oracle: enumerate the universe, count tuples matched by any
    // rule (Any = any named value).
    std::set<Tuple> expected;
    for (const Tuple& t : enumerate_universe(cat))
        for (const Rule& r : rules) {
            bool match = true;
            for (std::size_t i = 0; i < t.size(); ++i) {
                const Value& v = r.conditions[i];
                if (v.is_any() ? t[i] == 0 : t[i] != v.code()) { match = false; break; }
            }
            if (match) { expected.insert(t); break; }
        }
    CHECK(expected.size() == 18);
    CHECK(grounded.size() == 18);
    CHECK(tuple_set(grounded) == expected);
}

TEST_CASE("grounding: conflicting duplicate tuples raise ConsistencyViolation") {
    AttributeCatalog cat = dept_pair_catalog();
    Policy p = make_policy(cat, {grant_rule({Value::any(), Value::named(1)}),
                                 deny_rule_of({Value::named(1), Value::named(1)})});
    CHECK_THROWS_AS(ground_rules(p), Error);
    try {
        ground_rules(p);
    } catch (const Error& e) {
        CHECK(e.cls() == ErrorClass::ConsistencyViolation);
    }
    // Same tuple with identical outcome is deduplicated, not an error.
    Policy ok = make_policy(cat, {grant_rule({Value::any(), Value::named(1)}),
                                  grant_rule({Value::named(1), Value::named(1)})});
    CHECK(ground_rules(ok).size() == 2);
}

TEST_CASE("grounding idempotence on random policies") {
    Rng rng(2024);
    for (int i = 0; i < 40; ++i) {
        Policy p = random_policy(rng);
        auto once = ground_rules(p);
        Policy again = make_policy(p.catalog, once, p.permission_universe);
        CHECK(tuple_set(ground_rules(again)) == tuple_set(once));
    }
}

TEST_CASE("negatives: two binary attributes, one positive rule, three denies") {
    // Binary including NA: one named value per attribute.
    AttributeCatalog cat = AttributeCatalog::from_defs({
        {"A", Category::Subject, {"v"}},
        {"B", Category::Object, {"w"}},
    });
    Policy p = make_policy(cat, {grant_rule({Value::named(1), Value::named(1)})});
    auto negs = derive_negative_rules(p, NegativeMode::exhaustive());
    REQUIRE(negs.size() == 3);
    CHECK(tuple_set(negs) == std::set<Tuple>{{0, 0}, {0, 1}, {1, 0}});
    for (const Rule& r : negs) {
        CHECK(r.decision == Decision::Deny);
        CHECK(r.permissions.empty());
    }
}

TEST_CASE("negatives: full coverage raises EmptyComplement") {
    AttributeCatalog cat = AttributeCatalog::from_defs({{"A", Category::Subject, {"v"}}});
    Policy p = make_policy(cat, {grant_rule({Value::named(1)}),
                                 grant_rule({Value::na()}, {"read"})});
    try {
        derive_negative_rules(p, NegativeMode::exhaustive());
        FAIL("expected EmptyComplement");
    } catch (const Error& e) {
        CHECK(e.cls() == ErrorClass::EmptyComplement);
    }
}

TEST_CASE("negatives: universe cap raises UniverseOverflow") {
    std::vector<AttributeDef> defs;
    for (int a = 0; a < 10; ++a) {
        std::vector<std::string> values;
        for (int v = 0; v < 9; ++v) values.push_back("v" + std::to_string(v));
        defs.push_back({"A" + std::to_string(a), Category::Subject, values});
    }
    AttributeCatalog cat = AttributeCatalog::from_defs(std::move(defs));
    std::vector<Value> cond(10, Value::named(1));
    Policy p = make_policy(cat, {grant_rule(cond)});
    try {
        derive_negative_rules(p, NegativeMode::exhaustive());
        FAIL("expected UniverseOverflow");
    } catch (const Error& e) {
        CHECK(e.cls() == ErrorClass::UniverseOverflow);
    }
}

TEST_CASE("negatives: Sampled(1.0, seed) returns |PR| distinct reproducible denies") {
    AttributeCatalog cat = dept_pair_catalog(); // |U| = 9
    Policy p = make_policy(cat, {grant_rule({Value::named(1), Value::named(1)}),
                                 grant_rule({Value::named(2), Value::named(2)})});

    auto s1 = derive_negative_rules(p, NegativeMode::sampled(1.0, 7));
    auto s2 = derive_negative_rules(p, NegativeMode::sampled(1.0, 7));
    CHECK(s1.size() == 2);
    CHECK(tuple_set(s1) == tuple_set(s2));

    auto exhaustive = derive_negative_rules(p, NegativeMode::exhaustive());
    auto universe = tuple_set(exhaustive);
    for (const Rule& r : s1) CHECK(universe.count(tuple_of(r)) == 1);

    // Requesting more than the complement holds returns everything there is.
    auto all = derive_negative_rules(p, NegativeMode::sampled(100.0, 7));
    CHECK(all.size() == 7);
    CHECK(tuple_set(all) == universe);
}

TEST_CASE("complement correctness on random small catalogs") {
    Rng rng(99);
    for (int i = 0; i < 60; ++i) {
        Policy p = random_policy(rng);
        if (universe_size(p.catalog) > 100000) continue;
        std::set<Tuple> positives;
        for (const Rule& r : ground_rules(p))
            if (r.decision == Decision::Grant) positives.insert(tuple_of(r));

        std::set<Tuple> expected;
        for (const Tuple& t : enumerate_universe(p.catalog))
            if (!positives.count(t)) expected.insert(t);
        if (expected.empty()) continue;

        auto negs = derive_negative_rules(p, NegativeMode::exhaustive(200000));
        CHECK(tuple_set(negs) == expected);

        auto sampled = derive_negative_rules(p, NegativeMode::sampled(1.5, 11));
        for (const Rule& r : sampled) CHECK(expected.count(tuple_of(r)) == 1);
    }
}

TEST_CASE("covering_rule: exact, absent, and via-Any matches") {
    AttributeCatalog cat = dept_pair_catalog({"CS", "EE", "ME"});
    Policy p = make_policy(cat, {grant_rule({Value::named(1), Value::named(1)}),
                                 grant_rule({Value::any(), Value::named(3)})});

    auto exact = covering_rule(p, request_of({1, 1}));
    REQUIRE(exact.has_value());
    CHECK(exact->decision == Decision::Grant);

    CHECK_FALSE(covering_rule(p, request_of({2, 1})).has_value());
    CHECK_FALSE(covering_rule(p, request_of({0, 0})).has_value());

    // Matched against the grounded set, through the pre-expansion wildcard.
    auto via_any = covering_rule(p, request_of({2, 3}));
    REQUIRE(via_any.has_value());
    CHECK(via_any->permissions == std::vector<std::string>{"read"});
}

TEST_CASE("covering_rule finds every grounded training tuple") {
    Rng rng(5);
    Policy p = random_policy(rng);
    GroundedIndex index(ground_rules(p));
    for (const Rule& r : index.rules()) {
        AccessRequest req;
        req.assignments = r.conditions;
        auto hit = covering_rule(p, req);
        REQUIRE(hit.has_value());
        CHECK(hit->decision == r.decision);
    }
}

TEST_CASE("resolve_request rejects Any and unknown values") {
    AttributeCatalog cat = dept_pair_catalog();
    RawRequest raw;
    raw.values = {"CS", "Any"};
    CHECK_THROWS_AS(resolve_request(cat, raw), Error);
    raw.values = {"CS", "Physics"};
    try {
        resolve_request(cat, raw);
        FAIL("expected UnknownValue");
    } catch (const Error& e) {
        CHECK(e.cls() == ErrorClass::UnknownValue);
    }
    raw.values = {"CS", "NA"};
    AccessRequest ok = resolve_request(cat, raw);
    CHECK(ok.assignments[1].is_na());
}
