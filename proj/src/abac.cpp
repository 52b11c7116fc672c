#include "pammela/abac.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "pammela/random.hpp"

namespace pammela {

const char* to_string(Category c) {
    switch (c) {
        case Category::Subject: return "subject";
        case Category::Object: return "object";
        case Category::Environment: return "environment";
    }
    return "?";
}

Category category_from_string(const std::string& s) {
    if (s == "subject" || s == "Subject" || s == "S") return Category::Subject;
    if (s == "object" || s == "Object" || s == "O") return Category::Object;
    if (s == "environment" || s == "Environment" || s == "E") return Category::Environment;
    raise(ErrorClass::FormatError, "unknown attribute category '" + s + "'");
}

// ── AttributeCatalog ─────────────────────────────────────────────────────────

AttributeCatalog AttributeCatalog::from_defs(std::vector<AttributeDef> defs) {
    AttributeCatalog cat;
    cat.attrs_ = std::move(defs);
    cat.codes_.resize(cat.attrs_.size());
    std::unordered_set<std::string> seen_names;
    for (std::size_t i = 0; i < cat.attrs_.size(); ++i) {
        const AttributeDef& def = cat.attrs_[i];
        if (def.name.empty())
            raise(ErrorClass::FormatError, "attribute with empty name");
        std::string key = std::string(to_string(def.category)) + "/" + def.name;
        if (!seen_names.insert(key).second)
            raise(ErrorClass::FormatError, "duplicate attribute " + key);
        for (const std::string& v : def.values) {
            if (v.empty())
                raise(ErrorClass::FormatError, "empty value name in " + def.name);
            if (v == "NA" || v == "Any")
                raise(ErrorClass::FormatError,
                      "reserved name '" + v + "' used as a value of " + def.name);
        }
        cat.index_values(i);
    }
    return cat;
}

void AttributeCatalog::index_values(std::size_t attr) {
    auto& map = codes_[attr];
    map.clear();
    const auto& values = attrs_[attr].values;
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (!map.emplace(values[j], static_cast<std::int32_t>(j + 1)).second)
            raise(ErrorClass::FormatError,
                  "duplicate value '" + values[j] + "' in " + attrs_[attr].name);
    }
}

std::optional<std::size_t> AttributeCatalog::find(Category cat, const std::string& name) const {
    for (std::size_t i = 0; i < attrs_.size(); ++i)
        if (attrs_[i].category == cat && attrs_[i].name == name) return i;
    return std::nullopt;
}

std::string AttributeCatalog::label(std::size_t i) const {
    const char* prefix = "E_";
    if (attrs_[i].category == Category::Subject) prefix = "S_";
    else if (attrs_[i].category == Category::Object) prefix = "O_";
    return prefix + attrs_[i].name;
}

std::int32_t AttributeCatalog::code(std::size_t attr, const std::string& value) const {
    if (value == "NA") return 0;
    auto it = codes_[attr].find(value);
    if (it == codes_[attr].end())
        raise(ErrorClass::UnknownValue,
              "value '" + value + "' not in attribute " + label(attr) +
                  " (extend the catalog first)");
    return it->second;
}

std::optional<std::int32_t> AttributeCatalog::try_code(std::size_t attr,
                                                       const std::string& value) const {
    if (value == "NA") return 0;
    auto it = codes_[attr].find(value);
    if (it == codes_[attr].end()) return std::nullopt;
    return it->second;
}

const std::string& AttributeCatalog::value_name(std::size_t attr, std::int32_t code) const {
    static const std::string na = "NA";
    if (code == 0) return na;
    const auto& values = attrs_[attr].values;
    if (code < 1 || static_cast<std::size_t>(code) > values.size())
        raise(ErrorClass::UnknownValue,
              "code " + std::to_string(code) + " out of range for " + label(attr));
    return values[static_cast<std::size_t>(code - 1)];
}

AttributeCatalog AttributeCatalog::with_added_value(std::size_t attr,
                                                    const std::string& value) const {
    if (value.empty() || value == "NA" || value == "Any")
        raise(ErrorClass::FormatError, "invalid value name '" + value + "'");
    if (codes_[attr].count(value))
        raise(ErrorClass::DuplicateValue,
              "value '" + value + "' already present in " + label(attr));
    AttributeCatalog out = *this;
    out.attrs_[attr].values.push_back(value);
    out.codes_[attr].emplace(value, static_cast<std::int32_t>(out.attrs_[attr].values.size()));
    return out;
}

std::uint64_t AttributeCatalog::hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        h ^= 0xff;
        h *= 1099511628211ULL;
    };
    for (const AttributeDef& a : attrs_) {
        mix(to_string(a.category));
        mix(a.name);
        for (const std::string& v : a.values) mix(v);
    }
    return h;
}

// ── Rules and policies ───────────────────────────────────────────────────────

void validate_rule(const AttributeCatalog& catalog, const Rule& rule) {
    if (rule.conditions.size() != catalog.size())
        raise(ErrorClass::WidthMismatch,
              "rule has " + std::to_string(rule.conditions.size()) + " conditions, catalog has " +
                  std::to_string(catalog.size()) + " attributes");
    for (std::size_t i = 0; i < rule.conditions.size(); ++i) {
        const Value& v = rule.conditions[i];
        if (v.is_named() && v.code() > catalog.value_count(i))
            raise(ErrorClass::UnknownValue,
                  "condition code out of range for " + catalog.label(i));
    }
    if (rule.decision == Decision::Deny && !rule.permissions.empty())
        raise(ErrorClass::FormatError, "deny rule with non-empty permission set");
    if (rule.decision == Decision::Grant && rule.permissions.empty())
        raise(ErrorClass::FormatError, "grant rule with empty permission set");
}

std::vector<std::string> canonical_permissions(std::vector<std::string> perms) {
    std::sort(perms.begin(), perms.end());
    perms.erase(std::unique(perms.begin(), perms.end()), perms.end());
    return perms;
}

std::string permissions_label(const std::vector<std::string>& perms) {
    std::string out;
    for (std::size_t i = 0; i < perms.size(); ++i) {
        if (i) out += ';';
        out += perms[i];
    }
    return out;
}

void Policy::validate() const {
    std::unordered_set<std::string> universe(permission_universe.begin(),
                                             permission_universe.end());
    for (const Rule& r : rules) {
        validate_rule(catalog, r);
        for (const std::string& p : r.permissions)
            if (!universe.count(p))
                raise(ErrorClass::FormatError,
                      "permission '" + p + "' not in the policy's permission universe");
    }
    ground_rules(*this); // throws ConsistencyViolation on conflicts
}

AccessRequest resolve_request(const AttributeCatalog& catalog, const RawRequest& raw) {
    if (raw.values.size() != catalog.size())
        raise(ErrorClass::WidthMismatch, "request width does not match catalog");
    AccessRequest req;
    req.assignments.reserve(raw.values.size());
    for (std::size_t i = 0; i < raw.values.size(); ++i) {
        if (raw.values[i] == "Any")
            raise(ErrorClass::FormatError, "Any is not a valid request value");
        std::int32_t code = catalog.code(i, raw.values[i]);
        req.assignments.push_back(code == 0 ? Value::na() : Value::named(code));
    }
    req.truth = raw.truth;
    return req;
}

// ── Grounding ────────────────────────────────────────────────────────────────

Tuple tuple_of(const Rule& grounded_rule) {
    Tuple t;
    t.reserve(grounded_rule.conditions.size());
    for (const Value& v : grounded_rule.conditions) {
        if (v.is_any())
            raise(ErrorClass::FormatError, "tuple_of on a rule with Any");
        t.push_back(v.code());
    }
    return t;
}

Tuple tuple_of(const AccessRequest& request) {
    Tuple t;
    t.reserve(request.assignments.size());
    for (const Value& v : request.assignments) t.push_back(v.code());
    return t;
}

namespace {

struct Outcome {
    Decision decision;
    const std::vector<std::string>* permissions;
};

std::string describe_tuple(const AttributeCatalog& catalog, const Tuple& t) {
    std::string out = "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += ", ";
        out += catalog.value_name(i, t[i]);
    }
    return out + ")";
}

} // namespace

std::vector<Rule> ground_rules(const Policy& policy) {
    if (policy.catalog.empty())
        raise(ErrorClass::FormatError, "cannot ground rules over an empty catalog");

    std::vector<Rule> out;
    std::unordered_map<Tuple, Outcome, TupleHash> seen;

    for (const Rule& rule : policy.rules) {
        validate_rule(policy.catalog, rule);
        std::vector<std::size_t> wild;
        for (std::size_t i = 0; i < rule.conditions.size(); ++i)
            if (rule.conditions[i].is_any()) wild.push_back(i);

        Rule concrete = rule;
        // Odometer over the wildcard positions.
        std::vector<std::int32_t> idx(wild.size(), 1);
        bool more = true;
        while (more) {
            for (std::size_t w = 0; w < wild.size(); ++w)
                concrete.conditions[wild[w]] = Value::named(idx[w]);
            Tuple t = tuple_of(concrete);
            auto [it, inserted] = seen.emplace(t, Outcome{rule.decision, &rule.permissions});
            if (inserted) {
                out.push_back(concrete);
            } else if (it->second.decision != rule.decision ||
                       *it->second.permissions != rule.permissions) {
                raise(ErrorClass::ConsistencyViolation,
                      "conflicting rules for tuple " + describe_tuple(policy.catalog, t));
            }
            more = false;
            for (std::size_t w = wild.size(); w-- > 0;) {
                if (idx[w] < policy.catalog.value_count(wild[w])) {
                    ++idx[w];
                    std::fill(idx.begin() + static_cast<std::ptrdiff_t>(w) + 1, idx.end(), 1);
                    more = true;
                    break;
                }
            }
            if (wild.empty()) break;
        }
    }
    return out;
}

GroundedIndex::GroundedIndex(std::vector<Rule> grounded) : rules_(std::move(grounded)) {
    index_.reserve(rules_.size() * 2);
    for (std::size_t i = 0; i < rules_.size(); ++i)
        index_.emplace(tuple_of(rules_[i]), i);
}

const Rule* GroundedIndex::find(const Tuple& t) const {
    auto it = index_.find(t);
    return it == index_.end() ? nullptr : &rules_[it->second];
}

// ── Negative-rule derivation ─────────────────────────────────────────────────

std::uint64_t universe_size(const AttributeCatalog& catalog) {
    constexpr std::uint64_t kMax = ~0ULL >> 1;
    std::uint64_t size = 1;
    for (std::size_t i = 0; i < catalog.size(); ++i) {
        std::uint64_t radix = static_cast<std::uint64_t>(catalog.value_count(i)) + 1;
        if (size > kMax / radix) return kMax; // saturate
        size *= radix;
    }
    return size;
}

namespace {

Tuple decode_universe_index(const AttributeCatalog& catalog, std::uint64_t index) {
    Tuple t(catalog.size());
    for (std::size_t i = catalog.size(); i-- > 0;) {
        std::uint64_t radix = static_cast<std::uint64_t>(catalog.value_count(i)) + 1;
        t[i] = static_cast<std::int32_t>(index % radix);
        index /= radix;
    }
    return t;
}

Rule deny_rule(const Tuple& t) {
    Rule r;
    r.decision = Decision::Deny;
    r.conditions.reserve(t.size());
    for (std::int32_t c : t)
        r.conditions.push_back(c == 0 ? Value::na() : Value::named(c));
    return r;
}

std::unordered_set<Tuple, TupleHash> positive_tuples(const Policy& policy) {
    std::unordered_set<Tuple, TupleHash> pr;
    for (const Rule& r : ground_rules(policy))
        if (r.decision == Decision::Grant) pr.insert(tuple_of(r));
    return pr;
}

} // namespace

std::vector<Rule> derive_negative_rules(const Policy& policy, const NegativeMode& mode) {
    bool has_positive = false;
    for (const Rule& r : policy.rules)
        if (r.decision == Decision::Grant) { has_positive = true; break; }
    if (!has_positive)
        raise(ErrorClass::FormatError, "policy has no positive rules");

    if (mode.kind == NegativeMode::Kind::Sampled) {
        if (!(mode.ratio > 0.0))
            raise(ErrorClass::InvalidSpec, "sampled negative ratio must be positive");
        std::size_t positives = positive_tuples(policy).size();
        auto target = static_cast<std::uint64_t>(
            std::ceil(mode.ratio * static_cast<double>(positives)));
        return sample_complement(policy, target, mode.seed);
    }

    std::uint64_t u = universe_size(policy.catalog);
    if (u > mode.universe_cap)
        raise(ErrorClass::UniverseOverflow,
              "universe size " + std::to_string(u) + " exceeds cap " +
                  std::to_string(mode.universe_cap));

    auto pr = positive_tuples(policy);
    std::vector<Rule> out;
    out.reserve(static_cast<std::size_t>(u) - pr.size());
    for (std::uint64_t i = 0; i < u; ++i) {
        Tuple t = decode_universe_index(policy.catalog, i);
        if (!pr.count(t)) out.push_back(deny_rule(t));
    }
    if (out.empty())
        raise(ErrorClass::EmptyComplement, "positive rules cover the whole universe");
    return out;
}

std::vector<Rule> sample_complement(const Policy& policy, std::uint64_t count,
                                    std::uint64_t seed) {
    auto pr = positive_tuples(policy);
    std::uint64_t u = universe_size(policy.catalog);
    std::uint64_t complement = u - static_cast<std::uint64_t>(pr.size());
    if (complement == 0)
        raise(ErrorClass::EmptyComplement, "positive rules cover the whole universe");
    if (count > complement) count = complement; // everything there is

    std::vector<Rule> out;
    out.reserve(static_cast<std::size_t>(count));
    Rng rng(seed);

    // Dense complement: enumerate and subsample, otherwise rejection-sample.
    if (u != (~0ULL >> 1) && count * 4 >= complement * 3) {
        std::vector<Tuple> pool;
        pool.reserve(static_cast<std::size_t>(complement));
        for (std::uint64_t i = 0; i < u; ++i) {
            Tuple t = decode_universe_index(policy.catalog, i);
            if (!pr.count(t)) pool.push_back(std::move(t));
        }
        // Partial Fisher-Yates: the first `count` slots become the sample.
        for (std::uint64_t i = 0; i < count; ++i) {
            std::uint64_t j = i + rng.below(pool.size() - i);
            std::swap(pool[i], pool[j]);
            out.push_back(deny_rule(pool[i]));
        }
        return out;
    }

    std::unordered_set<Tuple, TupleHash> chosen;
    chosen.reserve(static_cast<std::size_t>(count) * 2);
    while (chosen.size() < count) {
        Tuple t = decode_universe_index(policy.catalog, rng.below(u));
        if (pr.count(t) || !chosen.insert(t).second) continue;
        out.push_back(deny_rule(t));
    }
    return out;
}

std::optional<Rule> covering_rule(const Policy& policy, const AccessRequest& request) {
    if (request.assignments.size() != policy.catalog.size())
        raise(ErrorClass::WidthMismatch, "request width does not match catalog");
    GroundedIndex index(ground_rules(policy));
    const Rule* hit = index.find(tuple_of(request));
    if (!hit) return std::nullopt;
    return *hit;
}

} // namespace pammela
