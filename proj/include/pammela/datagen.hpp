#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pammela/abac.hpp"
#include "pammela/encoding.hpp"

namespace pammela {

// Relation patterns are first-class data: the same predicates generate the
// policy's positive rules over the base catalog and act as the ground-truth
// oracle over the extended catalog (base plus the new values each access
// request introduces).
struct Predicate {
    enum class Kind {
        Equal,        // subject/object attribute values share a name (both named)
        ClusterEqual, // subject/object values sit in same-named clusters
        InSet,        // value name in a fixed set ("NA" allowed as a member)
        InCluster,    // value's cluster in a fixed set
        NotNA,        // any named value, including future ones
    };

    Kind kind = Kind::InSet;
    std::size_t attr_a = 0; // the attribute (or subject side for pair kinds)
    std::size_t attr_b = 0; // object side for Equal / ClusterEqual
    std::vector<std::string> values;   // InSet
    std::vector<std::string> clusters; // InCluster

    static Predicate equal(std::size_t subj, std::size_t obj);
    static Predicate cluster_equal(std::size_t subj, std::size_t obj);
    static Predicate in_set(std::size_t attr, std::vector<std::string> values);
    static Predicate in_cluster(std::size_t attr, std::vector<std::string> clusters);
    static Predicate not_na(std::size_t attr);
};

struct RelationPattern {
    std::string name;
    std::vector<Predicate> predicates; // must pin every catalog attribute
    std::vector<std::string> permissions;
};

struct TemplateCounts {
    std::size_t training_rules = 0;
    std::size_t positive_requests = 0;
    std::size_t negative_requests = 0;
};

struct SchemaTemplate {
    std::string name;
    AttributeCatalog base_catalog;
    // Cluster map over base AND new values for the clustered attributes.
    std::vector<ClusterAssignment> clusters;
    // Values the request log introduces, per §-style organizational change.
    std::vector<CatalogAddition> new_values;
    std::vector<RelationPattern> patterns;
    TemplateCounts counts;
    std::uint64_t seed = 0;
    bool full_scale = false;
};

SchemaTemplate university1_template(std::uint64_t seed);
SchemaTemplate university2_template(std::uint64_t seed, bool full_scale = false);
SchemaTemplate company_template(std::uint64_t seed);
SchemaTemplate template_by_name(const std::string& name, std::uint64_t seed,
                                bool full_scale = false);

// Overrides from a key=value config file: template, seed, full_scale,
// positive_requests, negative_requests.
SchemaTemplate template_from_config(const std::string& path);

struct SynthesizedDataset {
    Policy policy;                 // base catalog + pattern-generated rules
    RequestLog log;                // truth-labeled, each entry uncovered and
                                   // carrying at least one new value
    AttributeCatalog extended_catalog;
    std::vector<ClusterAssignment> clusters; // base + new-value assignments
};

SynthesizedDataset synthesize(const SchemaTemplate& tmpl);

// The generation oracle: evaluates the template's patterns on a concrete
// tuple over the extended catalog. Returns the granted permission set, or
// nullopt for deny.
std::optional<std::vector<std::string>> oracle_label(const SchemaTemplate& tmpl,
                                                     const AttributeCatalog& extended,
                                                     const Tuple& tuple);

// Pattern-expanded positive rules over the base catalog (what synthesize puts
// in the policy); exposed for count checks.
std::vector<Rule> expand_patterns(const SchemaTemplate& tmpl);

} // namespace pammela
