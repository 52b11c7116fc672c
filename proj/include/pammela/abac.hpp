#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pammela/errors.hpp"

namespace pammela {

enum class Category { Subject, Object, Environment };

const char* to_string(Category c);
Category category_from_string(const std::string& s);

enum class Decision { Grant, Deny };

// A condition/assignment value. NA is a first-class value (code 0); Any is a
// rule-authoring wildcard that never appears in requests or grounded rules.
class Value {
public:
    static Value any() { return Value(kAny); }
    static Value na() { return Value(0); }
    static Value named(std::int32_t code) { return Value(code); }

    bool is_any() const { return v_ == kAny; }
    bool is_na() const { return v_ == 0; }
    bool is_named() const { return v_ > 0; }

    // Concrete code: 0 for NA, 1..n for named values. Invalid for Any.
    std::int32_t code() const { return v_; }

    bool operator==(const Value&) const = default;

private:
    explicit Value(std::int32_t v) : v_(v) {}
    static constexpr std::int32_t kAny = -1;
    std::int32_t v_;
};

struct AttributeDef {
    std::string name;
    Category category = Category::Subject;
    std::vector<std::string> values; // code i+1 = values[i]
};

// The schema: ordered attributes with per-attribute value codebooks.
// Codes are canonical and stable: 1..n in definition order, NA = 0.
// Extension appends values, so codes assigned earlier never change.
class AttributeCatalog {
public:
    AttributeCatalog() = default;
    static AttributeCatalog from_defs(std::vector<AttributeDef> defs);

    std::size_t size() const { return attrs_.size(); }
    bool empty() const { return attrs_.empty(); }
    const AttributeDef& attribute(std::size_t i) const { return attrs_[i]; }
    const std::vector<AttributeDef>& attributes() const { return attrs_; }

    std::optional<std::size_t> find(Category cat, const std::string& name) const;

    // Column-style label, e.g. "S_Department".
    std::string label(std::size_t i) const;

    std::int32_t value_count(std::size_t i) const {
        return static_cast<std::int32_t>(attrs_[i].values.size());
    }

    // Codebook lookups. `code` throws UnknownValue; `try_code` returns nullopt.
    std::int32_t code(std::size_t attr, const std::string& value) const;
    std::optional<std::int32_t> try_code(std::size_t attr, const std::string& value) const;
    const std::string& value_name(std::size_t attr, std::int32_t code) const;

    // Returns a copy with `value` appended to attribute `attr` (next code).
    AttributeCatalog with_added_value(std::size_t attr, const std::string& value) const;

    // FNV-1a over the canonical serialization; binds models to schemas.
    std::uint64_t hash() const;

private:
    void index_values(std::size_t attr);
    std::vector<AttributeDef> attrs_;
    std::vector<std::unordered_map<std::string, std::int32_t>> codes_;
};

struct Rule {
    std::vector<Value> conditions; // one per catalog attribute, catalog order
    Decision decision = Decision::Deny;
    std::vector<std::string> permissions; // sorted; empty iff Deny

    bool operator==(const Rule&) const = default;
};

// Validates a rule against the catalog shape and Grant/Deny permission rules.
void validate_rule(const AttributeCatalog& catalog, const Rule& rule);

// Canonical form for a permission set: sorted and ';'-joined.
std::vector<std::string> canonical_permissions(std::vector<std::string> perms);
std::string permissions_label(const std::vector<std::string>& perms);

struct Policy {
    AttributeCatalog catalog;
    std::vector<Rule> rules;
    std::vector<std::string> permission_universe;

    // Grounds all rules, erroring on conflicting duplicates; checks that every
    // rule permission is in the universe.
    void validate() const;
};

struct TruthLabel {
    Decision decision = Decision::Deny;
    std::vector<std::string> permissions;
};

struct AccessRequest {
    std::vector<Value> assignments; // Named or NA only
    std::optional<TruthLabel> truth;
};

// Raw (string-valued) request log, aligned to the catalog's attribute order.
// Values may name attribute values that are not yet in the catalog; they are
// resolved after catalog extension.
struct RawRequest {
    std::vector<std::string> values;
    std::optional<TruthLabel> truth;
};

struct RequestLog {
    std::vector<RawRequest> entries;
};

AccessRequest resolve_request(const AttributeCatalog& catalog, const RawRequest& raw);

// ── Grounding and universe operations ────────────────────────────────────────

using Tuple = std::vector<std::int32_t>; // concrete codes, one per attribute

struct TupleHash {
    std::size_t operator()(const Tuple& t) const {
        std::uint64_t h = 1469598103934665603ULL;
        for (std::int32_t v : t) {
            h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v));
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

Tuple tuple_of(const Rule& grounded_rule);
Tuple tuple_of(const AccessRequest& request);

// Expands every `Any` over the attribute's current value set, removes exact
// duplicates, and errors on two identical tuples with different outcomes.
std::vector<Rule> ground_rules(const Policy& policy);

// Tuple-keyed index over a grounded rule list.
class GroundedIndex {
public:
    GroundedIndex() = default;
    explicit GroundedIndex(std::vector<Rule> grounded);

    const Rule* find(const Tuple& t) const;
    std::size_t size() const { return rules_.size(); }
    const std::vector<Rule>& rules() const { return rules_; }

private:
    std::vector<Rule> rules_;
    std::unordered_map<Tuple, std::size_t, TupleHash> index_;
};

struct NegativeMode {
    enum class Kind { Exhaustive, Sampled };
    Kind kind = Kind::Sampled;
    double ratio = 2.0;       // negatives per grounded positive (Sampled)
    std::uint64_t seed = 0;   // Sampled
    std::uint64_t universe_cap = 10'000'000; // Exhaustive guard

    static NegativeMode exhaustive(std::uint64_t cap = 10'000'000) {
        return {Kind::Exhaustive, 0.0, 0, cap};
    }
    static NegativeMode sampled(double ratio, std::uint64_t seed) {
        return {Kind::Sampled, ratio, seed, 10'000'000};
    }
};

// |U| = prod over attributes of (value_count + 1), saturating at 2^63-1.
std::uint64_t universe_size(const AttributeCatalog& catalog);

// NR = U \ PR as Deny rules. Exhaustive enumerates (UniverseOverflow beyond
// the cap); Sampled draws ceil(ratio * |PR_grounded|) distinct tuples,
// reproducible per seed. EmptyComplement when positives cover all of U.
std::vector<Rule> derive_negative_rules(const Policy& policy, const NegativeMode& mode);

// Draws exactly `count` distinct complement tuples (capped at |U \ PR|).
std::vector<Rule> sample_complement(const Policy& policy, std::uint64_t count,
                                    std::uint64_t seed);

// First grounded rule whose conditions equal the request, if any. Grounds the
// policy per call; bulk callers should hold a GroundedIndex instead.
std::optional<Rule> covering_rule(const Policy& policy, const AccessRequest& request);

} // namespace pammela
