#pragma once

#include <string>
#include <vector>

#include "pammela/abac.hpp"

namespace pammela::testing {

// Two attributes, one subject and one object, sharing the name "Department".
inline AttributeCatalog dept_pair_catalog(std::vector<std::string> values = {"CS", "EE"}) {
    return AttributeCatalog::from_defs({
        {"Department", Category::Subject, values},
        {"Department", Category::Object, values},
    });
}

inline Rule grant_rule(std::vector<Value> conditions,
                       std::vector<std::string> perms = {"read"}) {
    Rule r;
    r.conditions = std::move(conditions);
    r.decision = Decision::Grant;
    r.permissions = canonical_permissions(std::move(perms));
    return r;
}

inline Rule deny_rule_of(std::vector<Value> conditions) {
    Rule r;
    r.conditions = std::move(conditions);
    r.decision = Decision::Deny;
    return r;
}

inline Policy make_policy(AttributeCatalog catalog, std::vector<Rule> rules,
                          std::vector<std::string> universe = {"read"}) {
    Policy p;
    p.catalog = std::move(catalog);
    p.rules = std::move(rules);
    p.permission_universe = std::move(universe);
    return p;
}

inline AccessRequest request_of(std::vector<std::int32_t> codes) {
    AccessRequest r;
    for (std::int32_t c : codes)
        r.assignments.push_back(c == 0 ? Value::na() : Value::named(c));
    return r;
}

// Independent mixed-radix enumeration of the universe (NA included).
inline std::vector<Tuple> enumerate_universe(const AttributeCatalog& catalog) {
    std::vector<Tuple> out;
    Tuple t(catalog.size(), 0);
    for (;;) {
        out.push_back(t);
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
    return out;
}

} // namespace pammela::testing
