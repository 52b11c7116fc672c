#include "pammela/encoding.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace pammela {

namespace {

std::string cluster_key_error(const ClusterAssignment& a) {
    return std::string(to_string(a.category)) + "/" + a.attribute + "/" + a.value;
}

} // namespace

Encoder Encoder::fit(const AttributeCatalog& catalog, const EncoderConfig& config) {
    Encoder enc;
    enc.catalog_ = catalog;
    enc.config_ = config;

    std::size_t n = catalog.size();
    enc.remap_.assign(n, {});
    enc.inverse_remap_.assign(n, {});
    enc.cluster_of_.assign(n, {});
    enc.cluster_names_.assign(n, {});

    // Resolve the cluster map: per attribute, canonical code -> cluster name.
    std::vector<std::unordered_map<std::int32_t, std::string>> assignment(n);
    for (const ClusterAssignment& a : config.clusters) {
        auto attr = catalog.find(a.category, a.attribute);
        if (!attr)
            raise(ErrorClass::InvalidClusterMap, "unknown attribute " + cluster_key_error(a));
        auto code = catalog.try_code(*attr, a.value);
        if (!code || *code == 0)
            raise(ErrorClass::InvalidClusterMap, "unknown value " + cluster_key_error(a));
        auto [it, inserted] = assignment[*attr].emplace(*code, a.cluster);
        if (!inserted && it->second != a.cluster)
            raise(ErrorClass::InvalidClusterMap,
                  "value " + cluster_key_error(a) + " assigned to two clusters");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (assignment[i].empty()) continue;
        if (assignment[i].size() != static_cast<std::size_t>(catalog.value_count(i)))
            raise(ErrorClass::InvalidClusterMap,
                  "attribute " + catalog.label(i) + " is partially clustered");
    }

    for (std::size_t i = 0; i < n; ++i) {
        std::int32_t count = catalog.value_count(i);
        auto& remap = enc.remap_[i];
        remap.resize(static_cast<std::size_t>(count) + 1);
        remap[0] = 0;

        if (config.avc && !assignment[i].empty()) {
            // Cluster ids in order of first appearance along the value list;
            // codes reassigned cluster by cluster so members are consecutive.
            auto& names = enc.cluster_names_[i];
            std::unordered_map<std::string, std::int32_t> id_of;
            std::vector<std::int32_t> cluster_of_code(static_cast<std::size_t>(count) + 1, 0);
            for (std::int32_t c = 1; c <= count; ++c) {
                const std::string& cname = assignment[i].at(c);
                auto [it, inserted] =
                    id_of.emplace(cname, static_cast<std::int32_t>(names.size()) + 1);
                if (inserted) names.push_back(cname);
                cluster_of_code[static_cast<std::size_t>(c)] = it->second;
            }
            std::int32_t next = 1;
            for (std::int32_t id = 1; id <= static_cast<std::int32_t>(names.size()); ++id)
                for (std::int32_t c = 1; c <= count; ++c)
                    if (cluster_of_code[static_cast<std::size_t>(c)] == id)
                        remap[static_cast<std::size_t>(c)] = next++;
            enc.cluster_of_[i] = std::move(cluster_of_code);
        } else {
            for (std::int32_t c = 0; c <= count; ++c)
                remap[static_cast<std::size_t>(c)] = c;
        }
    }

    enc.build_layout();
    return enc;
}

void Encoder::build_layout() {
    std::size_t n = catalog_.size();

    inverse_remap_.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
        inverse_remap_[i].resize(remap_[i].size());
        for (std::size_t c = 0; c < remap_[i].size(); ++c)
            inverse_remap_[i][static_cast<std::size_t>(remap_[i][c])] =
                static_cast<std::int32_t>(c);
    }

    // Cluster and relation columns lead the layout: equal-gain split ties
    // resolve to the lowest feature index, and these are the columns whose
    // splits stay meaningful for values added after training.
    feature_names_.clear();
    avc_columns_.clear();
    if (config_.avc) {
        for (std::size_t i = 0; i < n; ++i) {
            if (cluster_of_[i].empty()) continue;
            avc_columns_.push_back(i);
            feature_names_.push_back(catalog_.label(i) + "_cluster");
        }
    }

    arfe_pairs_.clear();
    arfe_match_.clear();
    if (config_.arfe) {
        for (std::size_t s = 0; s < n; ++s) {
            if (catalog_.attribute(s).category != Category::Subject) continue;
            auto o = catalog_.find(Category::Object, catalog_.attribute(s).name);
            if (!o) continue;
            arfe_pairs_.emplace_back(s, *o);
            feature_names_.push_back("F_" + catalog_.attribute(s).name);
        }
        for (auto [s, o] : arfe_pairs_) {
            std::vector<std::int32_t> match(
                static_cast<std::size_t>(catalog_.value_count(s)) + 1, -1);
            for (std::int32_t c = 1; c <= catalog_.value_count(s); ++c) {
                auto oc = catalog_.try_code(o, catalog_.value_name(s, c));
                match[static_cast<std::size_t>(c)] = oc ? *oc : -1;
            }
            arfe_match_.push_back(std::move(match));
        }
    }

    for (std::size_t i = 0; i < n; ++i) feature_names_.push_back(catalog_.label(i));
}

std::vector<std::int32_t> Encoder::encode_row(std::span<const Value> assignments) const {
    std::size_t n = catalog_.size();
    if (assignments.size() != n)
        raise(ErrorClass::WidthMismatch, "assignment width does not match catalog");

    for (std::size_t i = 0; i < n; ++i) {
        const Value& v = assignments[i];
        if (v.is_any())
            raise(ErrorClass::FormatError, "cannot encode an Any value; ground first");
        if (v.code() > catalog_.value_count(i))
            raise(ErrorClass::UnknownValue,
                  "unregistered code for " + catalog_.label(i) +
                      " (extend the catalog first)");
    }

    std::vector<std::int32_t> row;
    row.reserve(feature_names_.size());
    for (std::size_t attr : avc_columns_) {
        std::int32_t c = assignments[attr].code();
        row.push_back(cluster_of_[attr][static_cast<std::size_t>(c)]);
    }
    for (std::size_t p = 0; p < arfe_pairs_.size(); ++p) {
        auto [s, o] = arfe_pairs_[p];
        std::int32_t sc = assignments[s].code();
        std::int32_t oc = assignments[o].code();
        if (sc == 0 || oc == 0) row.push_back(2);
        else row.push_back(arfe_match_[p][static_cast<std::size_t>(sc)] == oc ? 1 : 0);
    }
    for (std::size_t i = 0; i < n; ++i)
        row.push_back(remap_[i][static_cast<std::size_t>(assignments[i].code())]);
    return row;
}

Encoder Encoder::extend(const std::vector<CatalogAddition>& additions) const {
    Encoder out = *this;
    std::unordered_map<std::string, std::string> pending;
    for (const ClusterAssignment& a : config_.pending_clusters)
        pending[std::string(to_string(a.category)) + "/" + a.attribute + "/" + a.value] =
            a.cluster;

    for (const CatalogAddition& add : additions) {
        auto attr = out.catalog_.find(add.category, add.attribute);
        if (!attr)
            raise(ErrorClass::UnknownValue,
                  "unknown attribute " + add.attribute + " in catalog addition");
        std::size_t i = *attr;
        out.catalog_ = out.catalog_.with_added_value(i, add.value);
        std::int32_t canonical = out.catalog_.value_count(i);
        // Appended values take the next free encoded code: codes assigned
        // before the extension stay valid for already-trained models.
        out.remap_[i].push_back(canonical);

        if (config_.avc && !out.cluster_of_[i].empty()) {
            std::optional<std::string> cluster = add.cluster;
            if (!cluster) {
                auto it = pending.find(std::string(to_string(add.category)) + "/" +
                                       add.attribute + "/" + add.value);
                if (it != pending.end()) cluster = it->second;
            }
            if (!cluster)
                raise(ErrorClass::InvalidClusterMap,
                      "new value '" + add.value + "' of clustered attribute " +
                          out.catalog_.label(i) + " has no cluster assignment");
            auto& names = out.cluster_names_[i];
            auto found = std::find(names.begin(), names.end(), *cluster);
            std::int32_t id;
            if (found == names.end()) {
                names.push_back(*cluster);
                id = static_cast<std::int32_t>(names.size());
            } else {
                id = static_cast<std::int32_t>(found - names.begin()) + 1;
            }
            out.cluster_of_[i].push_back(id);
        }
    }
    out.build_layout();
    return out;
}

std::int32_t Encoder::encoded_code(std::size_t attr, std::int32_t canonical) const {
    return remap_[attr][static_cast<std::size_t>(canonical)];
}

std::int32_t Encoder::canonical_code(std::size_t attr, std::int32_t encoded) const {
    return inverse_remap_[attr][static_cast<std::size_t>(encoded)];
}

std::int32_t Encoder::cluster_code(std::size_t attr, std::int32_t canonical) const {
    if (cluster_of_[attr].empty()) return 0;
    return cluster_of_[attr][static_cast<std::size_t>(canonical)];
}

std::optional<std::string> Encoder::cluster_name(std::size_t attr,
                                                 std::int32_t canonical) const {
    std::int32_t id = cluster_code(attr, canonical);
    if (id == 0) return std::nullopt;
    return cluster_names_[attr][static_cast<std::size_t>(id - 1)];
}

Encoder fit_encoder(const AttributeCatalog& catalog, const EncoderConfig& config) {
    return Encoder::fit(catalog, config);
}

Encoder extend_catalog(const Encoder& encoder, const std::vector<CatalogAddition>& additions) {
    return encoder.extend(additions);
}

EncodedDataset encode_dataset(const Encoder& encoder, std::span<const Rule> grounded_rules) {
    EncodedDataset data;
    data.feature_names = encoder.feature_names();
    data.class_names = {"DENY"};

    std::unordered_map<std::string, std::int32_t> class_of;
    data.rows.reserve(grounded_rules.size());
    for (const Rule& r : grounded_rules) {
        FeatureRow row;
        row.features = encoder.encode_row(r.conditions);
        if (r.decision == Decision::Deny) {
            row.label = 0;
        } else {
            std::string key = permissions_label(canonical_permissions(r.permissions));
            auto [it, inserted] =
                class_of.emplace(key, static_cast<std::int32_t>(data.class_names.size()));
            if (inserted) data.class_names.push_back(key);
            row.label = it->second;
        }
        data.rows.push_back(std::move(row));
    }
    return data;
}

std::vector<std::string> permissions_of_class_name(const std::string& class_name) {
    if (class_name == "DENY") return {};
    std::vector<std::string> perms;
    std::string cur;
    for (char c : class_name) {
        if (c == ';') { perms.push_back(cur); cur.clear(); }
        else cur += c;
    }
    if (!cur.empty()) perms.push_back(cur);
    return perms;
}

std::vector<std::string> permissions_of_class(const EncodedDataset& dataset,
                                              std::int32_t label) {
    if (label <= 0) return {};
    return permissions_of_class_name(dataset.class_names[static_cast<std::size_t>(label)]);
}

} // namespace pammela
