#include "pammela/datagen.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "pammela/config.hpp"
#include "pammela/random.hpp"

namespace pammela {

Predicate Predicate::equal(std::size_t subj, std::size_t obj) {
    Predicate p;
    p.kind = Kind::Equal;
    p.attr_a = subj;
    p.attr_b = obj;
    return p;
}

Predicate Predicate::cluster_equal(std::size_t subj, std::size_t obj) {
    Predicate p;
    p.kind = Kind::ClusterEqual;
    p.attr_a = subj;
    p.attr_b = obj;
    return p;
}

Predicate Predicate::in_set(std::size_t attr, std::vector<std::string> values) {
    Predicate p;
    p.kind = Kind::InSet;
    p.attr_a = attr;
    p.values = std::move(values);
    return p;
}

Predicate Predicate::in_cluster(std::size_t attr, std::vector<std::string> clusters) {
    Predicate p;
    p.kind = Kind::InCluster;
    p.attr_a = attr;
    p.clusters = std::move(clusters);
    return p;
}

Predicate Predicate::not_na(std::size_t attr) {
    Predicate p;
    p.kind = Kind::NotNA;
    p.attr_a = attr;
    return p;
}

namespace {

// Per-attribute cluster names by canonical code over a given catalog.
std::vector<std::vector<std::string>> cluster_table(
    const AttributeCatalog& catalog, const std::vector<ClusterAssignment>& clusters) {
    std::vector<std::vector<std::string>> table(catalog.size());
    for (std::size_t i = 0; i < catalog.size(); ++i)
        table[i].assign(static_cast<std::size_t>(catalog.value_count(i)) + 1, "");
    for (const ClusterAssignment& a : clusters) {
        auto attr = catalog.find(a.category, a.attribute);
        if (!attr) continue; // assignments for other catalogs are fine
        auto code = catalog.try_code(*attr, a.value);
        if (!code || *code == 0) continue; // not (yet) in this catalog
        table[*attr][static_cast<std::size_t>(*code)] = a.cluster;
    }
    return table;
}

// Codes an attribute may take under the pattern's unary predicates (NA = 0).
std::vector<std::int32_t> allowed_codes(const RelationPattern& pattern, std::size_t attr,
                                        const AttributeCatalog& catalog,
                                        const std::vector<std::vector<std::string>>& clusters,
                                        bool& constrained) {
    std::int32_t n = catalog.value_count(attr);
    std::vector<bool> allowed(static_cast<std::size_t>(n) + 1, true);
    constrained = false;
    for (const Predicate& p : pattern.predicates) {
        if (p.attr_a != attr || p.kind == Predicate::Kind::Equal ||
            p.kind == Predicate::Kind::ClusterEqual)
            continue;
        constrained = true;
        std::vector<bool> pass(static_cast<std::size_t>(n) + 1, false);
        switch (p.kind) {
            case Predicate::Kind::InSet:
                for (const std::string& v : p.values) {
                    auto code = catalog.try_code(attr, v);
                    if (code) pass[static_cast<std::size_t>(*code)] = true;
                }
                break;
            case Predicate::Kind::InCluster:
                for (std::int32_t c = 1; c <= n; ++c)
                    for (const std::string& cl : p.clusters)
                        if (clusters[attr][static_cast<std::size_t>(c)] == cl)
                            pass[static_cast<std::size_t>(c)] = true;
                break;
            case Predicate::Kind::NotNA:
                for (std::int32_t c = 1; c <= n; ++c) pass[static_cast<std::size_t>(c)] = true;
                break;
            default: break;
        }
        for (std::int32_t c = 0; c <= n; ++c)
            allowed[static_cast<std::size_t>(c)] =
                allowed[static_cast<std::size_t>(c)] && pass[static_cast<std::size_t>(c)];
    }
    std::vector<std::int32_t> out;
    for (std::int32_t c = 0; c <= n; ++c)
        if (allowed[static_cast<std::size_t>(c)]) out.push_back(c);
    return out;
}

struct Slot {
    bool is_pair = false;
    std::size_t a = 0;
    std::size_t b = 0;
    std::vector<std::int32_t> unary;                            // codes
    std::vector<std::pair<std::int32_t, std::int32_t>> pairs;   // (a, b) codes
    bool compress_any = false; // unary slot covering all named values
};

// Slot layout for one pattern over a catalog. Every attribute must be pinned
// by a predicate; pair slots bind two attributes jointly.
std::vector<Slot> pattern_slots(const RelationPattern& pattern,
                                const AttributeCatalog& catalog,
                                const std::vector<std::vector<std::string>>& clusters,
                                bool compress) {
    std::size_t n = catalog.size();
    std::vector<int> pair_of(n, -1);
    std::vector<const Predicate*> pair_preds;
    for (const Predicate& p : pattern.predicates) {
        if (p.kind != Predicate::Kind::Equal && p.kind != Predicate::Kind::ClusterEqual)
            continue;
        if (pair_of[p.attr_a] != -1 || pair_of[p.attr_b] != -1)
            raise(ErrorClass::InvalidSpec,
                  "pattern '" + pattern.name + "' binds an attribute in two pair predicates");
        pair_of[p.attr_a] = static_cast<int>(pair_preds.size());
        pair_of[p.attr_b] = static_cast<int>(pair_preds.size());
        pair_preds.push_back(&p);
    }

    std::vector<Slot> slots;
    std::vector<bool> done(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (done[i]) continue;
        bool constrained = false;
        std::vector<std::int32_t> allowed =
            allowed_codes(pattern, i, catalog, clusters, constrained);

        if (pair_of[i] >= 0) {
            const Predicate& p = *pair_preds[static_cast<std::size_t>(pair_of[i])];
            std::size_t a = p.attr_a, b = p.attr_b;
            bool ca = false, cb = false;
            std::vector<std::int32_t> allow_a = allowed_codes(pattern, a, catalog, clusters, ca);
            std::vector<std::int32_t> allow_b = allowed_codes(pattern, b, catalog, clusters, cb);
            std::vector<bool> in_a(static_cast<std::size_t>(catalog.value_count(a)) + 1, false);
            std::vector<bool> in_b(static_cast<std::size_t>(catalog.value_count(b)) + 1, false);
            for (std::int32_t c : allow_a) in_a[static_cast<std::size_t>(c)] = true;
            for (std::int32_t c : allow_b) in_b[static_cast<std::size_t>(c)] = true;

            Slot slot;
            slot.is_pair = true;
            slot.a = a;
            slot.b = b;
            for (std::int32_t va = 1; va <= catalog.value_count(a); ++va) {
                if (!in_a[static_cast<std::size_t>(va)]) continue;
                if (p.kind == Predicate::Kind::Equal) {
                    auto vb = catalog.try_code(b, catalog.value_name(a, va));
                    if (vb && *vb > 0 && in_b[static_cast<std::size_t>(*vb)])
                        slot.pairs.emplace_back(va, *vb);
                } else {
                    const std::string& cl = clusters[a][static_cast<std::size_t>(va)];
                    if (cl.empty()) continue;
                    for (std::int32_t vb = 1; vb <= catalog.value_count(b); ++vb)
                        if (in_b[static_cast<std::size_t>(vb)] &&
                            clusters[b][static_cast<std::size_t>(vb)] == cl)
                            slot.pairs.emplace_back(va, vb);
                }
            }
            if (slot.pairs.empty())
                raise(ErrorClass::InvalidSpec,
                      "pattern '" + pattern.name + "' has an empty pair slot");
            done[a] = done[b] = true;
            slots.push_back(std::move(slot));
            continue;
        }

        if (!constrained)
            raise(ErrorClass::InvalidSpec, "pattern '" + pattern.name +
                                               "' leaves attribute " + catalog.label(i) +
                                               " unconstrained");
        if (allowed.empty())
            raise(ErrorClass::InvalidSpec, "pattern '" + pattern.name +
                                               "' has an empty slot for " + catalog.label(i));
        Slot slot;
        slot.a = i;
        slot.unary = std::move(allowed);
        if (compress &&
            slot.unary.size() == static_cast<std::size_t>(catalog.value_count(i)) &&
            slot.unary.front() != 0)
            slot.compress_any = true;
        done[i] = true;
        slots.push_back(std::move(slot));
    }
    return slots;
}

void emit_rules(const RelationPattern& pattern, const std::vector<Slot>& slots,
                std::size_t n_attrs, std::vector<Rule>& out) {
    std::vector<std::size_t> idx(slots.size(), 0);
    Rule rule;
    rule.decision = Decision::Grant;
    rule.permissions = canonical_permissions(pattern.permissions);
    rule.conditions.assign(n_attrs, Value::na());
    for (;;) {
        for (std::size_t s = 0; s < slots.size(); ++s) {
            const Slot& slot = slots[s];
            if (slot.is_pair) {
                auto [va, vb] = slot.pairs[idx[s]];
                rule.conditions[slot.a] = Value::named(va);
                rule.conditions[slot.b] = Value::named(vb);
            } else if (slot.compress_any) {
                rule.conditions[slot.a] = Value::any();
            } else {
                std::int32_t c = slot.unary[idx[s]];
                rule.conditions[slot.a] = c == 0 ? Value::na() : Value::named(c);
            }
        }
        out.push_back(rule);
        std::size_t s = slots.size();
        for (; s-- > 0;) {
            std::size_t limit = slots[s].is_pair ? slots[s].pairs.size()
                               : slots[s].compress_any ? 1
                                                       : slots[s].unary.size();
            if (++idx[s] < limit) break;
            idx[s] = 0;
        }
        if (s == static_cast<std::size_t>(-1)) break;
    }
}

bool predicate_holds(const Predicate& p, const AttributeCatalog& catalog,
                     const std::vector<std::vector<std::string>>& clusters,
                     const Tuple& t) {
    switch (p.kind) {
        case Predicate::Kind::Equal: {
            std::int32_t va = t[p.attr_a], vb = t[p.attr_b];
            if (va == 0 || vb == 0) return false;
            return catalog.value_name(p.attr_a, va) == catalog.value_name(p.attr_b, vb);
        }
        case Predicate::Kind::ClusterEqual: {
            std::int32_t va = t[p.attr_a], vb = t[p.attr_b];
            if (va == 0 || vb == 0) return false;
            const std::string& ca = clusters[p.attr_a][static_cast<std::size_t>(va)];
            const std::string& cb = clusters[p.attr_b][static_cast<std::size_t>(vb)];
            return !ca.empty() && ca == cb;
        }
        case Predicate::Kind::InSet: {
            const std::string& name = catalog.value_name(p.attr_a, t[p.attr_a]);
            return std::find(p.values.begin(), p.values.end(), name) != p.values.end();
        }
        case Predicate::Kind::InCluster: {
            std::int32_t v = t[p.attr_a];
            if (v == 0) return false;
            const std::string& cl = clusters[p.attr_a][static_cast<std::size_t>(v)];
            return !cl.empty() &&
                   std::find(p.clusters.begin(), p.clusters.end(), cl) != p.clusters.end();
        }
        case Predicate::Kind::NotNA:
            return t[p.attr_a] != 0;
    }
    return false;
}

} // namespace

std::vector<Rule> expand_patterns(const SchemaTemplate& tmpl) {
    auto clusters = cluster_table(tmpl.base_catalog, tmpl.clusters);
    std::vector<Rule> rules;
    for (const RelationPattern& pattern : tmpl.patterns) {
        auto slots = pattern_slots(pattern, tmpl.base_catalog, clusters, /*compress=*/true);
        emit_rules(pattern, slots, tmpl.base_catalog.size(), rules);
    }
    return rules;
}

std::optional<std::vector<std::string>> oracle_label(const SchemaTemplate& tmpl,
                                                     const AttributeCatalog& extended,
                                                     const Tuple& tuple) {
    auto clusters = cluster_table(extended, tmpl.clusters);
    for (const RelationPattern& pattern : tmpl.patterns) {
        bool all = true;
        for (const Predicate& p : pattern.predicates)
            if (!predicate_holds(p, extended, clusters, tuple)) { all = false; break; }
        if (all) return canonical_permissions(pattern.permissions);
    }
    return std::nullopt;
}

// ── Synthesis ────────────────────────────────────────────────────────────────

namespace {

struct RequestSampler {
    const SchemaTemplate& tmpl;
    const AttributeCatalog& extended;
    std::vector<std::vector<std::string>> clusters;
    std::vector<std::int32_t> base_counts;
    std::vector<std::size_t> attrs_with_new;
    // Per pattern: slot layout over the extended catalog, plus which slots can
    // inject a new value (choices touching codes beyond the base count).
    struct PatternSlots {
        std::vector<Slot> slots;
        std::vector<std::size_t> injectable;                 // slot indices
        std::vector<std::vector<std::size_t>> new_choices;   // per slot, choice idx
    };
    std::vector<PatternSlots> patterns;
    std::vector<std::size_t> generable; // patterns with at least one injectable slot

    RequestSampler(const SchemaTemplate& t, const AttributeCatalog& ext)
        : tmpl(t), extended(ext) {
        clusters = cluster_table(extended, tmpl.clusters);
        base_counts.resize(extended.size());
        for (std::size_t i = 0; i < extended.size(); ++i)
            base_counts[i] = tmpl.base_catalog.value_count(i);
        for (std::size_t i = 0; i < extended.size(); ++i)
            if (extended.value_count(i) > base_counts[i]) attrs_with_new.push_back(i);

        for (const RelationPattern& pattern : tmpl.patterns) {
            PatternSlots ps;
            ps.slots = pattern_slots(pattern, extended, clusters, /*compress=*/false);
            ps.new_choices.resize(ps.slots.size());
            for (std::size_t s = 0; s < ps.slots.size(); ++s) {
                const Slot& slot = ps.slots[s];
                if (slot.is_pair) {
                    for (std::size_t c = 0; c < slot.pairs.size(); ++c)
                        if (slot.pairs[c].first > base_counts[slot.a] ||
                            slot.pairs[c].second > base_counts[slot.b])
                            ps.new_choices[s].push_back(c);
                } else {
                    for (std::size_t c = 0; c < slot.unary.size(); ++c)
                        if (slot.unary[c] > base_counts[slot.a])
                            ps.new_choices[s].push_back(c);
                }
                if (!ps.new_choices[s].empty()) ps.injectable.push_back(s);
            }
            if (!ps.injectable.empty()) generable.push_back(patterns.size());
            patterns.push_back(std::move(ps));
        }
    }

    bool has_new_value(const Tuple& t) const {
        for (std::size_t i = 0; i < t.size(); ++i)
            if (t[i] > base_counts[i]) return true;
        return false;
    }

    // A tuple satisfying a pattern, with one slot forced to a new value.
    std::optional<Tuple> guided(Rng& rng) const {
        if (generable.empty()) return std::nullopt;
        const PatternSlots& ps =
            patterns[generable[rng.below(generable.size())]];
        Tuple t(extended.size(), 0);
        for (const Slot& slot : ps.slots) {
            if (slot.is_pair) {
                auto [va, vb] = slot.pairs[rng.below(slot.pairs.size())];
                t[slot.a] = va;
                t[slot.b] = vb;
            } else {
                t[slot.a] = slot.unary[rng.below(slot.unary.size())];
            }
        }
        if (!has_new_value(t)) {
            std::size_t s = ps.injectable[rng.below(ps.injectable.size())];
            const Slot& slot = ps.slots[s];
            std::size_t c = ps.new_choices[s][rng.below(ps.new_choices[s].size())];
            if (slot.is_pair) {
                t[slot.a] = slot.pairs[c].first;
                t[slot.b] = slot.pairs[c].second;
            } else {
                t[slot.a] = slot.unary[c];
            }
        }
        return t;
    }

    Tuple uniform(Rng& rng) const {
        Tuple t(extended.size());
        for (std::size_t i = 0; i < extended.size(); ++i)
            t[i] = static_cast<std::int32_t>(
                rng.below(static_cast<std::uint64_t>(extended.value_count(i)) + 1));
        return t;
    }

    void force_new_value(Tuple& t, Rng& rng) const {
        if (has_new_value(t) || attrs_with_new.empty()) return;
        std::size_t attr = attrs_with_new[rng.below(attrs_with_new.size())];
        std::int32_t lo = base_counts[attr] + 1;
        std::int32_t hi = extended.value_count(attr);
        t[attr] = static_cast<std::int32_t>(rng.between(lo, hi));
    }

    // Near-miss: a guided tuple with 1-2 attributes re-randomized.
    std::optional<Tuple> corrupted(Rng& rng) const {
        auto base = guided(rng);
        if (!base) return std::nullopt;
        Tuple t = std::move(*base);
        std::size_t flips = 1 + rng.below(2);
        for (std::size_t i = 0; i < flips; ++i) {
            std::size_t attr = rng.below(extended.size());
            t[attr] = static_cast<std::int32_t>(
                rng.below(static_cast<std::uint64_t>(extended.value_count(attr)) + 1));
        }
        return t;
    }
};

} // namespace

SynthesizedDataset synthesize(const SchemaTemplate& tmpl) {
    SynthesizedDataset out;
    out.policy.catalog = tmpl.base_catalog;
    out.policy.rules = expand_patterns(tmpl);
    {
        std::unordered_set<std::string> universe;
        for (const Rule& r : out.policy.rules)
            for (const std::string& p : r.permissions)
                if (universe.insert(p).second)
                    out.policy.permission_universe.push_back(p);
    }
    if (tmpl.counts.training_rules != 0 &&
        out.policy.rules.size() != tmpl.counts.training_rules)
        raise(ErrorClass::InfeasibleCounts,
              "template '" + tmpl.name + "' expanded to " +
                  std::to_string(out.policy.rules.size()) + " rules, expected " +
                  std::to_string(tmpl.counts.training_rules));
    out.policy.validate();

    out.extended_catalog = tmpl.base_catalog;
    for (const CatalogAddition& add : tmpl.new_values) {
        auto attr = out.extended_catalog.find(add.category, add.attribute);
        if (!attr)
            raise(ErrorClass::InvalidSpec,
                  "template new value names unknown attribute " + add.attribute);
        out.extended_catalog = out.extended_catalog.with_added_value(*attr, add.value);
    }
    out.clusters = tmpl.clusters;

    std::uint64_t u = universe_size(out.extended_catalog);
    if (tmpl.counts.positive_requests + tmpl.counts.negative_requests > u)
        raise(ErrorClass::InfeasibleCounts, "request counts exceed the universe");

    RequestSampler sampler(tmpl, out.extended_catalog);
    Rng rng(mix64(tmpl.seed ^ 0xda7a9e4ULL));

    std::vector<std::pair<Tuple, std::vector<std::string>>> positives;
    std::vector<Tuple> negatives;
    std::unordered_set<Tuple, TupleHash> seen;
    std::uint64_t attempts = 0;
    const std::uint64_t cap =
        2000ULL * (tmpl.counts.positive_requests + tmpl.counts.negative_requests) + 10000;

    while (positives.size() < tmpl.counts.positive_requests ||
           negatives.size() < tmpl.counts.negative_requests) {
        if (++attempts > cap)
            raise(ErrorClass::InfeasibleCounts,
                  "could not synthesize the requested log sizes for '" + tmpl.name + "'");

        bool want_positive = positives.size() < tmpl.counts.positive_requests;
        std::optional<Tuple> t;
        if (want_positive) {
            t = sampler.guided(rng);
            if (!t)
                raise(ErrorClass::InfeasibleCounts,
                      "no pattern of '" + tmpl.name + "' can produce new-value requests");
        } else {
            t = rng.below(2) ? sampler.corrupted(rng) : sampler.uniform(rng);
            if (!t) t = sampler.uniform(rng);
            sampler.force_new_value(*t, rng);
        }
        if (!sampler.has_new_value(*t) || !seen.insert(*t).second) continue;

        auto label = oracle_label(tmpl, out.extended_catalog, *t);
        if (label) {
            if (positives.size() < tmpl.counts.positive_requests)
                positives.emplace_back(std::move(*t), std::move(*label));
        } else {
            if (negatives.size() < tmpl.counts.negative_requests)
                negatives.push_back(std::move(*t));
        }
    }

    struct Entry {
        Tuple tuple;
        std::optional<std::vector<std::string>> perms;
    };
    std::vector<Entry> entries;
    entries.reserve(positives.size() + negatives.size());
    for (auto& [t, perms] : positives) entries.push_back({std::move(t), std::move(perms)});
    for (auto& t : negatives) entries.push_back({std::move(t), std::nullopt});
    rng.shuffle(entries);

    for (const Entry& e : entries) {
        RawRequest raw;
        raw.values.reserve(e.tuple.size());
        for (std::size_t i = 0; i < e.tuple.size(); ++i)
            raw.values.push_back(out.extended_catalog.value_name(i, e.tuple[i]));
        TruthLabel truth;
        if (e.perms) {
            truth.decision = Decision::Grant;
            truth.permissions = *e.perms;
        } else {
            truth.decision = Decision::Deny;
        }
        raw.truth = truth;
        out.log.entries.push_back(std::move(raw));
    }
    return out;
}

// ── Organization templates ───────────────────────────────────────────────────

namespace {

std::vector<std::string> seq_values(const std::string& prefix, int n) {
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%03d", i);
        out.push_back(prefix + buf);
    }
    return out;
}

void assign_cluster_range(std::vector<ClusterAssignment>& out, Category cat,
                          const std::string& attr, const std::vector<std::string>& values,
                          int from, int to, const std::string& cluster) {
    for (int i = from; i <= to; ++i)
        out.push_back({cat, attr, values[static_cast<std::size_t>(i - 1)], cluster});
}

} // namespace

SchemaTemplate university1_template(std::uint64_t seed) {
    SchemaTemplate t;
    t.name = "university1";
    t.seed = seed;

    const std::vector<std::string> designations = {"Assistant Professor",
                                                   "Associate Professor", "Professor"};
    const std::vector<std::string> departments = {"Computer Science", "Electrical Engineering",
                                                  "Mechanical Engineering", "Civil Engineering"};
    const std::vector<std::string> degrees = {"BTech", "MTech"};
    const std::vector<std::string> years = {"1", "2", "3", "4"};
    const std::vector<std::string> resources = {"Question-Paper", "Answer-Script",
                                                "Assignment",     "Quiz",
                                                "Mark-Sheet",     "Course-Material",
                                                "Project-Report"};

    t.base_catalog = AttributeCatalog::from_defs({
        {"Designation", Category::Subject, designations},
        {"Department", Category::Subject, departments},
        {"Degree", Category::Subject, degrees},
        {"Year", Category::Subject, years},
        {"Resource-Type", Category::Object, resources},
        {"Department", Category::Object, departments},
        {"Degree", Category::Object, degrees},
        {"Year", Category::Object, years},
    });

    auto& cl = t.clusters;
    cl.push_back({Category::Subject, "Designation", "Assistant Professor", "asst"});
    cl.push_back({Category::Subject, "Designation", "Associate Professor", "assoc"});
    cl.push_back({Category::Subject, "Designation", "Professor", "prof"});
    cl.push_back({Category::Subject, "Designation", "Distinguished Professor", "prof"});
    cl.push_back({Category::Subject, "Designation", "Lecturer", "asst"});
    cl.push_back({Category::Object, "Resource-Type", "Question-Paper", "exam"});
    cl.push_back({Category::Object, "Resource-Type", "Answer-Script", "exam"});
    cl.push_back({Category::Object, "Resource-Type", "Assignment", "assess"});
    cl.push_back({Category::Object, "Resource-Type", "Quiz", "assess"});
    cl.push_back({Category::Object, "Resource-Type", "Mark-Sheet", "records"});
    cl.push_back({Category::Object, "Resource-Type", "Course-Material", "materials"});
    cl.push_back({Category::Object, "Resource-Type", "Project-Report", "reports"});
    cl.push_back({Category::Object, "Resource-Type", "Presentation", "assess"});
    cl.push_back({Category::Object, "Resource-Type", "Tutorial", "materials"});

    t.new_values = {
        {Category::Subject, "Designation", "Distinguished Professor", "prof"},
        {Category::Subject, "Designation", "Lecturer", "asst"},
        {Category::Subject, "Department", "Information Technology", std::nullopt},
        {Category::Subject, "Degree", "PhD", std::nullopt},
        {Category::Object, "Resource-Type", "Presentation", "assess"},
        {Category::Object, "Resource-Type", "Tutorial", "materials"},
        {Category::Object, "Department", "Information Technology", std::nullopt},
        {Category::Object, "Degree", "PhD", std::nullopt},
    };

    enum : std::size_t { SDes, SDep, SDeg, SYr, ORes, ODep, ODeg, OYr };
    const std::vector<std::string> access = {"access"};

    t.patterns.push_back({"faculty-exam-own-dept",
                          {Predicate::in_cluster(SDes, {"asst", "assoc", "prof"}),
                           Predicate::equal(SDep, ODep),
                           Predicate::in_set(SDeg, {"NA"}),
                           Predicate::in_set(SYr, {"NA"}),
                           Predicate::in_cluster(ORes, {"exam"}),
                           Predicate::in_set(ODeg, {"NA"}),
                           Predicate::in_set(OYr, {"NA"})},
                          access});
    t.patterns.push_back({"senior-records-own-dept",
                          {Predicate::in_cluster(SDes, {"assoc", "prof"}),
                           Predicate::equal(SDep, ODep),
                           Predicate::in_set(SDeg, {"NA"}),
                           Predicate::in_set(SYr, {"NA"}),
                           Predicate::in_cluster(ORes, {"records"}),
                           Predicate::in_set(ODeg, {"NA"}),
                           Predicate::in_set(OYr, {"NA"})},
                          access});
    t.patterns.push_back({"student-assessments-own-cohort",
                          {Predicate::in_set(SDes, {"NA"}),
                           Predicate::equal(SDep, ODep),
                           Predicate::equal(SDeg, ODeg),
                           Predicate::not_na(SYr),
                           Predicate::in_cluster(ORes, {"assess"}),
                           Predicate::not_na(OYr)},
                          access});
    t.patterns.push_back({"senior-student-reports",
                          {Predicate::in_set(SDes, {"NA"}),
                           Predicate::equal(SDep, ODep),
                           Predicate::equal(SDeg, ODeg),
                           Predicate::in_set(SYr, {"3", "4"}),
                           Predicate::in_cluster(ORes, {"reports"}),
                           Predicate::not_na(OYr)},
                          access});
    t.patterns.push_back({"professor-materials-own-dept",
                          {Predicate::in_cluster(SDes, {"prof"}),
                           Predicate::equal(SDep, ODep),
                           Predicate::in_set(SDeg, {"NA"}),
                           Predicate::in_set(SYr, {"NA"}),
                           Predicate::in_cluster(ORes, {"materials"}),
                           Predicate::in_set(ODeg, {"NA"}),
                           Predicate::in_set(OYr, {"NA"})},
                          access});
    t.patterns.push_back({"student-materials-any-dept",
                          {Predicate::in_set(SDes, {"NA"}),
                           Predicate::not_na(SDep),
                           Predicate::not_na(SDeg),
                           Predicate::not_na(SYr),
                           Predicate::in_cluster(ORes, {"materials"}),
                           Predicate::not_na(ODep),
                           Predicate::not_na(ODeg),
                           Predicate::not_na(OYr)},
                          access});

    t.counts = {53, 598, 412};
    return t;
}

SchemaTemplate university2_template(std::uint64_t seed, bool full_scale) {
    SchemaTemplate t;
    t.name = "university2";
    t.seed = seed;
    t.full_scale = full_scale;

    const std::vector<std::string> designations = {"Professor", "Associate Professor",
                                                   "Assistant Professor", "Lecturer",
                                                   "Teaching Assistant"};
    const std::vector<std::string> posts = {"Regular", "Adhoc"};
    const std::vector<std::string> departments = {"Computer Science", "Electrical Engineering",
                                                  "Mechanical Engineering", "Civil Engineering",
                                                  "Biotechnology"};
    const std::vector<std::string> courses = seq_values("Course-", 120);
    const std::vector<std::string> degrees = {"BTech", "MTech"};
    const std::vector<std::string> years = {"1", "2", "3", "4"};
    const std::vector<std::string> resources = {"Question-Paper", "Answer-Script",
                                                "Assignment",     "Quiz",
                                                "Mark-Sheet",     "Grade-Report",
                                                "Course-Material", "Project-Report"};

    t.base_catalog = AttributeCatalog::from_defs({
        {"Designation", Category::Subject, designations},
        {"Post", Category::Subject, posts},
        {"Department", Category::Subject, departments},
        {"Course", Category::Subject, courses},
        {"Degree", Category::Subject, degrees},
        {"Year", Category::Subject, years},
        {"Resource-Type", Category::Object, resources},
        {"Department", Category::Object, departments},
        {"Course", Category::Object, courses},
        {"Degree", Category::Object, degrees},
        {"Year", Category::Object, years},
    });

    auto& cl = t.clusters;
    cl.push_back({Category::Subject, "Designation", "Professor", "prof"});
    cl.push_back({Category::Subject, "Designation", "Associate Professor", "assoc"});
    cl.push_back({Category::Subject, "Designation", "Assistant Professor", "asst"});
    cl.push_back({Category::Subject, "Designation", "Lecturer", "lect"});
    cl.push_back({Category::Subject, "Designation", "Teaching Assistant", "ta"});
    cl.push_back({Category::Subject, "Designation", "Visiting Professor", "assoc"});
    cl.push_back({Category::Subject, "Designation", "Adjunct Lecturer", "lect"});
    cl.push_back({Category::Object, "Resource-Type", "Question-Paper", "exam"});
    cl.push_back({Category::Object, "Resource-Type", "Answer-Script", "exam"});
    cl.push_back({Category::Object, "Resource-Type", "Assignment", "assess"});
    cl.push_back({Category::Object, "Resource-Type", "Quiz", "assess"});
    cl.push_back({Category::Object, "Resource-Type", "Mark-Sheet", "records"});
    cl.push_back({Category::Object, "Resource-Type", "Grade-Report", "records"});
    cl.push_back({Category::Object, "Resource-Type", "Course-Material", "materials"});
    cl.push_back({Category::Object, "Resource-Type", "Project-Report", "materials"});
    cl.push_back({Category::Object, "Resource-Type", "Presentation", "assess"});
    cl.push_back({Category::Object, "Resource-Type", "Tutorial", "materials"});
    if (full_scale) {
        // Course blocks: splits can select a block with one threshold, and the
        // block patterns stay expressible after new courses arrive.
        assign_cluster_range(cl, Category::Subject, "Course", courses, 1, 60, "ug");
        assign_cluster_range(cl, Category::Subject, "Course", courses, 61, 120, "pg");
        assign_cluster_range(cl, Category::Object, "Course", courses, 1, 60, "ug");
        assign_cluster_range(cl, Category::Object, "Course", courses, 61, 120, "pg");
        cl.push_back({Category::Subject, "Course", "Course-121", "ug"});
        cl.push_back({Category::Subject, "Course", "Course-122", "pg"});
        cl.push_back({Category::Object, "Course", "Course-121", "ug"});
        cl.push_back({Category::Object, "Course", "Course-122", "pg"});
    }

    t.new_values = {
        {Category::Subject, "Designation", "Visiting Professor", "assoc"},
        {Category::Subject, "Designation", "Adjunct Lecturer", "lect"},
        {Category::Subject, "Post", "Contract", std::nullopt},
        {Category::Subject, "Department", "Information Technology", std::nullopt},
        {Category::Subject, "Course", "Course-121",
         full_scale ? std::optional<std::string>("ug") : std::nullopt},
        {Category::Subject, "Course", "Course-122",
         full_scale ? std::optional<std::string>("pg") : std::nullopt},
        {Category::Object, "Resource-Type", "Presentation", "assess"},
        {Category::Object, "Resource-Type", "Tutorial", "materials"},
        {Category::Object, "Department", "Information Technology", std::nullopt},
        {Category::Object, "Course", "Course-121",
         full_scale ? std::optional<std::string>("ug") : std::nullopt},
        {Category::Object, "Course", "Course-122",
         full_scale ? std::optional<std::string>("pg") : std::nullopt},
    };

    enum : std::size_t { SDes, SPost, SDep, SCr, SDeg, SYr, ORes, ODep, OCr, ODeg, OYr };
    const std::vector<std::string> access = {"access"};
    const std::vector<std::string> all_na = {"NA"};

    if (!full_scale) {
        t.patterns.push_back({"faculty-exam-own-course",
                              {Predicate::in_cluster(SDes, {"prof", "assoc", "asst", "lect"}),
                               Predicate::not_na(SPost),
                               Predicate::in_set(SDep, all_na),
                               Predicate::equal(SCr, OCr),
                               Predicate::in_set(SDeg, all_na),
                               Predicate::in_set(SYr, all_na),
                               Predicate::in_cluster(ORes, {"exam"}),
                               Predicate::in_set(ODep, all_na),
                               Predicate::in_set(ODeg, all_na),
                               Predicate::in_set(OYr, all_na)},
                              access});
        t.patterns.push_back({"ta-assessments-own-course",
                              {Predicate::in_cluster(SDes, {"ta"}),
                               Predicate::not_na(SPost),
                               Predicate::in_set(SDep, all_na),
                               Predicate::equal(SCr, OCr),
                               Predicate::in_set(SDeg, all_na),
                               Predicate::in_set(SYr, all_na),
                               Predicate::in_cluster(ORes, {"assess"}),
                               Predicate::in_set(ODep, all_na),
                               Predicate::in_set(ODeg, all_na),
                               Predicate::in_set(OYr, all_na)},
                              access});
        t.patterns.push_back({"student-materials-own-course",
                              {Predicate::in_set(SDes, all_na),
                               Predicate::in_set(SPost, all_na),
                               Predicate::in_set(SDep, all_na),
                               Predicate::equal(SCr, OCr),
                               Predicate::equal(SDeg, ODeg),
                               Predicate::not_na(SYr),
                               Predicate::in_cluster(ORes, {"materials"}),
                               Predicate::in_set(ODep, all_na),
                               Predicate::in_set(OYr, all_na)},
                              access});
        t.patterns.push_back({"student-assessments-own-course",
                              {Predicate::in_set(SDes, all_na),
                               Predicate::in_set(SPost, all_na),
                               Predicate::in_set(SDep, all_na),
                               Predicate::equal(SCr, OCr),
                               Predicate::not_na(SDeg),
                               Predicate::not_na(SYr),
                               Predicate::in_cluster(ORes, {"assess"}),
                               Predicate::in_set(ODep, all_na),
                               Predicate::in_set(ODeg, all_na),
                               Predicate::in_set(OYr, all_na)},
                              access});
        t.patterns.push_back({"senior-records-own-dept",
                              {Predicate::in_cluster(SDes, {"prof", "assoc"}),
                               Predicate::not_na(SPost),
                               Predicate::equal(SDep, ODep),
                               Predicate::in_set(SCr, all_na),
                               Predicate::in_set(SDeg, all_na),
                               Predicate::in_set(SYr, all_na),
                               Predicate::in_cluster(ORes, {"records"}),
                               Predicate::in_set(OCr, all_na),
                               Predicate::in_set(ODeg, all_na),
                               Predicate::in_set(OYr, all_na)},
                              access});
        t.patterns.push_back({"senior-exam-own-dept",
                              {Predicate::in_cluster(SDes, {"prof", "assoc"}),
                               Predicate::not_na(SPost),
                               Predicate::equal(SDep, ODep),
                               Predicate::in_set(SCr, all_na),
                               Predicate::in_set(SDeg, all_na),
                               Predicate::in_set(SYr, all_na),
                               Predicate::in_cluster(ORes, {"exam"}),
                               Predicate::in_set(OCr, all_na),
                               Predicate::in_set(ODeg, all_na),
                               Predicate::in_set(OYr, all_na)},
                              access});
        t.patterns.push_back({"junior-exam-own-dept",
                              {Predicate::in_cluster(SDes, {"asst", "lect"}),
                               Predicate::not_na(SPost),
                               Predicate::equal(SDep, ODep),
                               Predicate::in_set(SCr, all_na),
                               Predicate::in_set(SDeg, all_na),
                               Predicate::in_set(SYr, all_na),
                               Predicate::in_cluster(ORes, {"exam"}),
                               Predicate::in_set(OCr, all_na),
                               Predicate::in_set(ODeg, all_na),
                               Predicate::in_set(OYr, all_na)},
                              access});
        t.patterns.push_back({"ta-records-own-dept",
                              {Predicate::in_cluster(SDes, {"ta"}),
                               Predicate::not_na(SPost),
                               Predicate::equal(SDep, ODep),
                               Predicate::in_set(SCr, all_na),
                               Predicate::in_set(SDeg, all_na),
                               Predicate::in_set(SYr, all_na),
                               Predicate::in_cluster(ORes, {"records"}),
                               Predicate::in_set(OCr, all_na),
                               Predicate::in_set(ODeg, all_na),
                               Predicate::in_set(OYr, all_na)},
                              access});
        t.patterns.push_back({"student-reports-own-dept",
                              {Predicate::in_set(SDes, all_na),
                               Predicate::in_set(SPost, all_na),
                               Predicate::equal(SDep, ODep),
                               Predicate::in_set(SCr, all_na),
                               Predicate::equal(SDeg, ODeg),
                               Predicate::not_na(SYr),
                               Predicate::in_set(ORes, {"Project-Report"}),
                               Predicate::in_set(OCr, all_na),
                               Predicate::in_set(OYr, all_na)},
                              access});
        t.counts = {2000, 308, 175};
    } else {
        t.patterns.push_back({"student-materials-same-block",
                              {Predicate::in_set(SDes, all_na),
                               Predicate::in_set(SPost, all_na),
                               Predicate::in_set(SDep, all_na),
                               Predicate::cluster_equal(SCr, OCr),
                               Predicate::equal(SDeg, ODeg),
                               Predicate::in_set(SYr, all_na),
                               Predicate::in_cluster(ORes, {"materials"}),
                               Predicate::in_set(ODep, all_na),
                               Predicate::in_set(OYr, all_na)},
                              access});
        t.patterns.push_back({"junior-materials-pg-block",
                              {Predicate::in_cluster(SDes, {"asst", "lect"}),
                               Predicate::in_set(SPost, {"Regular"}),
                               Predicate::in_set(SDep, all_na),
                               Predicate::cluster_equal(SCr, OCr),
                               Predicate::in_cluster(SCr, {"pg"}),
                               Predicate::in_set(SDeg, all_na),
                               Predicate::in_set(SYr, all_na),
                               Predicate::in_cluster(ORes, {"materials"}),
                               Predicate::in_set(ODep, all_na),
                               Predicate::in_set(ODeg, all_na),
                               Predicate::in_set(OYr, all_na)},
                              access});
        t.patterns.push_back({"ta-assessments-ug-block",
                              {Predicate::in_cluster(SDes, {"ta"}),
                               Predicate::in_set(SPost, {"Regular"}),
                               Predicate::in_set(SDep, all_na),
                               Predicate::cluster_equal(SCr, OCr),
                               Predicate::in_cluster(SCr, {"ug"}),
                               Predicate::in_set(SDeg, all_na),
                               Predicate::in_set(SYr, all_na),
                               Predicate::in_cluster(ORes, {"assess"}),
                               Predicate::in_set(ODep, all_na),
                               Predicate::in_set(ODeg, all_na),
                               Predicate::in_set(OYr, all_na)},
                              access});
        t.patterns.push_back({"faculty-exam-own-course",
                              {Predicate::in_cluster(SDes, {"prof", "assoc", "asst", "lect"}),
                               Predicate::in_set(SPost, {"Regular"}),
                               Predicate::in_set(SDep, all_na),
                               Predicate::equal(SCr, OCr),
                               Predicate::in_set(SDeg, all_na),
                               Predicate::in_set(SYr, all_na),
                               Predicate::in_cluster(ORes, {"exam"}),
                               Predicate::in_set(ODep, all_na),
                               Predicate::in_set(ODeg, all_na),
                               Predicate::in_set(OYr, all_na)},
                              access});
        t.patterns.push_back({"student-assessments-own-course",
                              {Predicate::in_set(SDes, all_na),
                               Predicate::in_set(SPost, all_na),
                               Predicate::in_set(SDep, all_na),
                               Predicate::equal(SCr, OCr),
                               Predicate::equal(SDeg, ODeg),
                               Predicate::in_set(SYr, all_na),
                               Predicate::in_cluster(ORes, {"assess"}),
                               Predicate::in_set(ODep, all_na),
                               Predicate::in_set(OYr, all_na)},
                              access});
        t.patterns.push_back({"prof-marksheet-own-course",
                              {Predicate::in_cluster(SDes, {"prof"}),
                               Predicate::in_set(SPost, {"Regular"}),
                               Predicate::in_set(SDep, all_na),
                               Predicate::equal(SCr, OCr),
                               Predicate::in_set(SDeg, all_na),
                               Predicate::in_set(SYr, all_na),
                               Predicate::in_set(ORes, {"Mark-Sheet"}),
                               Predicate::in_set(ODep, all_na),
                               Predicate::in_set(ODeg, all_na),
                               Predicate::in_set(OYr, all_na)},
                              access});
        t.patterns.push_back({"assoc-marksheet-own-course",
                              {Predicate::in_cluster(SDes, {"assoc"}),
                               Predicate::in_set(SPost, {"Regular"}),
                               Predicate::in_set(SDep, all_na),
                               Predicate::equal(SCr, OCr),
                               Predicate::in_set(SDeg, all_na),
                               Predicate::in_set(SYr, all_na),
                               Predicate::in_set(ORes, {"Mark-Sheet"}),
                               Predicate::in_set(ODep, all_na),
                               Predicate::in_set(ODeg, all_na),
                               Predicate::in_set(OYr, all_na)},
                              access});
        t.patterns.push_back({"asst-marksheet-own-course",
                              {Predicate::in_cluster(SDes, {"asst"}),
                               Predicate::in_set(SPost, {"Regular"}),
                               Predicate::in_set(SDep, all_na),
                               Predicate::equal(SCr, OCr),
                               Predicate::in_set(SDeg, all_na),
                               Predicate::in_set(SYr, all_na),
                               Predicate::in_set(ORes, {"Mark-Sheet"}),
                               Predicate::in_set(ODep, all_na),
                               Predicate::in_set(ODeg, all_na),
                               Predicate::in_set(OYr, all_na)},
                              access});
        {
            std::vector<std::string> first59(courses.begin(), courses.begin() + 59);
            t.patterns.push_back({"ta-gradereport-intro-courses",
                                  {Predicate::in_cluster(SDes, {"ta"}),
                                   Predicate::in_set(SPost, {"Regular"}),
                                   Predicate::in_set(SDep, all_na),
                                   Predicate::in_set(SCr, first59),
                                   Predicate::in_set(SDeg, all_na),
                                   Predicate::in_set(SYr, all_na),
                                   Predicate::in_set(ORes, {"Grade-Report"}),
                                   Predicate::in_set(ODep, all_na),
                                   Predicate::in_set(OCr, all_na),
                                   Predicate::in_set(ODeg, all_na),
                                   Predicate::in_set(OYr, all_na)},
                                  access});
        }
        t.counts = {52259, 308, 175};
    }
    return t;
}

SchemaTemplate company_template(std::uint64_t seed) {
    SchemaTemplate t;
    t.name = "company";
    t.seed = seed;

    const std::vector<std::string> designations = {
        "Intern",          "Junior Developer", "Senior Developer", "Tech Lead",
        "Architect",       "QA Engineer",      "QA Lead",          "Product Manager",
        "HR Executive",    "HR Manager",       "Finance Analyst",  "Director"};
    const std::vector<std::string> projects = {"Apollo", "Zeus"};
    const std::vector<std::string> s_departments = {"Engineering", "QA", "HR", "Finance",
                                                    "Operations"};
    const std::vector<std::string> o_departments = {"Engineering", "QA", "HR", "Finance"};
    const std::vector<std::string> resources = {"Source-Code",  "Design-Doc",
                                                "Deployment-Config", "Test-Plan",
                                                "Project-Plan", "Payroll-Data",
                                                "Employee-Record", "Budget-Report"};

    t.base_catalog = AttributeCatalog::from_defs({
        {"Designation", Category::Subject, designations},
        {"Project-Name", Category::Subject, projects},
        {"Department", Category::Subject, s_departments},
        {"Resource-Type", Category::Object, resources},
        {"Project-Name", Category::Object, projects},
        {"Department", Category::Object, o_departments},
    });

    auto& cl = t.clusters;
    auto desig = [&](const std::string& v, const std::string& c) {
        cl.push_back({Category::Subject, "Designation", v, c});
    };
    desig("Intern", "intern");
    desig("Junior Developer", "eng");
    desig("Senior Developer", "eng");
    desig("Tech Lead", "eng");
    desig("Architect", "eng");
    desig("QA Engineer", "qa");
    desig("QA Lead", "qa");
    desig("Product Manager", "mgmt");
    desig("HR Executive", "hr");
    desig("HR Manager", "hr");
    desig("Finance Analyst", "fin");
    desig("Director", "mgmt");
    desig("Staff Engineer", "eng");
    desig("DevOps Engineer", "eng");
    auto res = [&](const std::string& v, const std::string& c) {
        cl.push_back({Category::Object, "Resource-Type", v, c});
    };
    res("Source-Code", "dev");
    res("Design-Doc", "dev");
    res("Deployment-Config", "dev");
    res("Test-Plan", "qa-res");
    res("Project-Plan", "plan");
    res("Payroll-Data", "hr-res");
    res("Employee-Record", "hr-res");
    res("Budget-Report", "fin-res");
    res("Code-Review", "dev");
    res("Audit-Report", "fin-res");

    t.new_values = {
        {Category::Subject, "Designation", "Staff Engineer", "eng"},
        {Category::Subject, "Designation", "DevOps Engineer", "eng"},
        {Category::Subject, "Project-Name", "Hermes", std::nullopt},
        {Category::Object, "Resource-Type", "Code-Review", "dev"},
        {Category::Object, "Resource-Type", "Audit-Report", "fin-res"},
        {Category::Object, "Project-Name", "Hermes", std::nullopt},
    };

    enum : std::size_t { SDes, SProj, SDep, ORes, OProj, ODep };
    const std::vector<std::string> access = {"access"};
    auto na = [](std::size_t a) { return Predicate::in_set(a, {"NA"}); };

    t.patterns.push_back({"eng-dev-own-project",
                          {Predicate::in_cluster(SDes, {"eng"}),
                           Predicate::equal(SProj, OProj),
                           Predicate::equal(SDep, ODep),
                           Predicate::in_cluster(ORes, {"dev"})},
                          access});
    t.patterns.push_back({"eng-plan-own-project",
                          {Predicate::in_cluster(SDes, {"eng"}),
                           Predicate::equal(SProj, OProj),
                           Predicate::equal(SDep, ODep),
                           Predicate::in_cluster(ORes, {"plan"})},
                          access});
    t.patterns.push_back({"qa-verification-own-project",
                          {Predicate::in_cluster(SDes, {"qa"}),
                           Predicate::equal(SProj, OProj),
                           Predicate::equal(SDep, ODep),
                           Predicate::in_cluster(ORes, {"qa-res", "dev"})},
                          access});
    t.patterns.push_back({"qa-plan-own-project",
                          {Predicate::in_cluster(SDes, {"qa"}),
                           Predicate::equal(SProj, OProj),
                           Predicate::equal(SDep, ODep),
                           Predicate::in_cluster(ORes, {"plan"})},
                          access});
    t.patterns.push_back({"mgmt-planning-own-dept",
                          {Predicate::in_cluster(SDes, {"mgmt"}),
                           Predicate::not_na(SProj),
                           Predicate::equal(SDep, ODep),
                           Predicate::in_cluster(ORes, {"plan", "fin-res"}),
                           Predicate::not_na(OProj)},
                          access});
    t.patterns.push_back({"mgmt-dev-own-dept",
                          {Predicate::in_cluster(SDes, {"mgmt"}),
                           Predicate::not_na(SProj),
                           Predicate::equal(SDep, ODep),
                           Predicate::in_cluster(ORes, {"dev"}),
                           Predicate::not_na(OProj)},
                          access});
    t.patterns.push_back({"hr-people-records",
                          {Predicate::in_cluster(SDes, {"hr"}),
                           na(SProj),
                           Predicate::in_set(SDep, {"HR"}),
                           Predicate::in_cluster(ORes, {"hr-res"}),
                           na(OProj),
                           Predicate::not_na(ODep)},
                          access});
    t.patterns.push_back({"fin-budget",
                          {Predicate::in_cluster(SDes, {"fin"}),
                           na(SProj),
                           Predicate::in_set(SDep, {"Finance"}),
                           Predicate::in_cluster(ORes, {"fin-res"}),
                           na(OProj),
                           Predicate::not_na(ODep)},
                          access});
    t.patterns.push_back({"intern-dev-own-project",
                          {Predicate::in_cluster(SDes, {"intern"}),
                           Predicate::equal(SProj, OProj),
                           Predicate::equal(SDep, ODep),
                           Predicate::in_cluster(ORes, {"dev"})},
                          access});
    t.patterns.push_back({"leads-apollo-to-zeus",
                          {Predicate::in_set(SDes, {"Tech Lead", "Architect"}),
                           Predicate::in_set(SProj, {"Apollo"}),
                           Predicate::equal(SDep, ODep),
                           Predicate::in_cluster(ORes, {"dev"}),
                           Predicate::in_set(OProj, {"Zeus"})},
                          access});
    t.patterns.push_back({"leads-zeus-to-apollo",
                          {Predicate::in_set(SDes, {"Tech Lead", "Architect"}),
                           Predicate::in_set(SProj, {"Zeus"}),
                           Predicate::equal(SDep, ODep),
                           Predicate::in_cluster(ORes, {"dev"}),
                           Predicate::in_set(OProj, {"Apollo"})},
                          access});
    t.patterns.push_back({"director-everything",
                          {Predicate::in_set(SDes, {"Director"}),
                           Predicate::not_na(SProj),
                           Predicate::not_na(SDep),
                           Predicate::not_na(ORes),
                           Predicate::not_na(OProj),
                           Predicate::not_na(ODep)},
                          access});
    t.patterns.push_back({"qa-eng-dept-support",
                          {Predicate::in_cluster(SDes, {"qa"}),
                           Predicate::equal(SProj, OProj),
                           Predicate::in_set(SDep, {"QA"}),
                           Predicate::in_cluster(ORes, {"dev"}),
                           Predicate::in_set(ODep, {"Engineering"})},
                          access});
    t.patterns.push_back({"eng-testplan-own-project",
                          {Predicate::in_cluster(SDes, {"eng"}),
                           Predicate::equal(SProj, OProj),
                           Predicate::equal(SDep, ODep),
                           Predicate::in_cluster(ORes, {"qa-res"})},
                          access});
    t.patterns.push_back({"intern-plan-own-project",
                          {Predicate::in_cluster(SDes, {"intern"}),
                           Predicate::equal(SProj, OProj),
                           Predicate::equal(SDep, ODep),
                           Predicate::in_cluster(ORes, {"plan"})},
                          access});
    t.patterns.push_back({"hr-manager-budget",
                          {Predicate::in_set(SDes, {"HR Manager"}),
                           na(SProj),
                           Predicate::in_set(SDep, {"HR"}),
                           Predicate::in_cluster(ORes, {"fin-res"}),
                           na(OProj),
                           Predicate::in_set(ODep, {"HR", "Finance"})},
                          access});
    t.patterns.push_back({"fin-payroll",
                          {Predicate::in_cluster(SDes, {"fin"}),
                           na(SProj),
                           Predicate::in_set(SDep, {"Finance"}),
                           Predicate::in_set(ORes, {"Payroll-Data"}),
                           na(OProj),
                           Predicate::not_na(ODep)},
                          access});
    t.patterns.push_back({"pm-employee-records",
                          {Predicate::in_set(SDes, {"Product Manager"}),
                           Predicate::not_na(SProj),
                           Predicate::in_set(SDep, {"Engineering", "QA", "Operations"}),
                           Predicate::in_set(ORes, {"Employee-Record"}),
                           na(OProj),
                           Predicate::in_set(ODep, {"HR"})},
                          access});

    t.counts = {384, 93, 198};
    return t;
}

SchemaTemplate template_by_name(const std::string& name, std::uint64_t seed,
                                bool full_scale) {
    if (name == "university1") return university1_template(seed);
    if (name == "university2") return university2_template(seed, full_scale);
    if (name == "company") return company_template(seed);
    raise(ErrorClass::InvalidSpec, "unknown template '" + name + "'");
}

SchemaTemplate template_from_config(const std::string& path) {
    auto kv = parse_kv_file(path);
    auto it = kv.find("template");
    if (it == kv.end()) raise(ErrorClass::InvalidSpec, path + ": missing 'template'");
    std::uint64_t seed = 0;
    bool full_scale = false;
    if (kv.count("seed")) seed = std::stoull(kv.at("seed"));
    if (kv.count("full_scale")) full_scale = kv.at("full_scale") == "true";
    SchemaTemplate t = template_by_name(it->second, seed, full_scale);
    if (kv.count("positive_requests"))
        t.counts.positive_requests = std::stoull(kv.at("positive_requests"));
    if (kv.count("negative_requests"))
        t.counts.negative_requests = std::stoull(kv.at("negative_requests"));
    return t;
}

} // namespace pammela
