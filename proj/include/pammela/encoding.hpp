#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pammela/abac.hpp"

namespace pammela {

struct ClusterAssignment {
    Category category = Category::Subject;
    std::string attribute;
    std::string value;
    std::string cluster;
};

struct EncoderConfig {
    bool arfe = false;
    bool avc = false;
    // Admin-authored cluster map over catalog values. Under AVC a clustered
    // attribute must have every value assigned (singleton clusters allowed).
    std::vector<ClusterAssignment> clusters;
    // Assignments for values that are not in the catalog yet; consulted when
    // the catalog is extended (e.g. from a request log naming new values).
    std::vector<ClusterAssignment> pending_clusters;
};

struct CatalogAddition {
    Category category = Category::Subject;
    std::string attribute;
    std::string value;
    std::optional<std::string> cluster;
};

struct FeatureRow {
    std::vector<std::int32_t> features;
    std::int32_t label = 0; // 0 = DENY, k >= 1 = k-th permission-set class
};

struct EncodedDataset {
    std::vector<FeatureRow> rows;
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names; // [0] = "DENY"

    std::size_t n_features() const { return feature_names.size(); }
    std::size_t n_classes() const { return class_names.size(); }
};

// Frozen feature layout over a catalog:
//   - one column per attribute carrying the value's code (NA -> 0); under AVC
//     codes are reassigned so same-cluster values are consecutive,
//   - with ARFE, one relation column F_<name> per attribute name present in
//     both the subject and object categories: 1 equal, 0 different, 2 if
//     either side is NA,
//   - with AVC, one column per clustered attribute carrying the value's
//     1-based cluster code (NA -> 0).
// Immutable; extend() returns a new encoder that appends codes so models
// trained before the extension remain valid.
class Encoder {
public:
    Encoder() = default; // empty; assign from fit()
    static Encoder fit(const AttributeCatalog& catalog, const EncoderConfig& config);

    Encoder extend(const std::vector<CatalogAddition>& additions) const;

    std::vector<std::int32_t> encode_row(std::span<const Value> assignments) const;
    std::vector<std::int32_t> encode_request(const AccessRequest& request) const {
        return encode_row(request.assignments);
    }

    std::size_t n_features() const { return feature_names_.size(); }
    const std::vector<std::string>& feature_names() const { return feature_names_; }
    const AttributeCatalog& catalog() const { return catalog_; }
    const EncoderConfig& config() const { return config_; }

    // Encoded code for a canonical code (identity unless AVC reordered).
    std::int32_t encoded_code(std::size_t attr, std::int32_t canonical) const;
    // Inverse mapping; both directions exist for every registered value.
    std::int32_t canonical_code(std::size_t attr, std::int32_t encoded) const;

    bool attribute_clustered(std::size_t attr) const { return !cluster_of_[attr].empty(); }
    // 1-based cluster code for a canonical value code; 0 for NA.
    std::int32_t cluster_code(std::size_t attr, std::int32_t canonical) const;
    std::optional<std::string> cluster_name(std::size_t attr, std::int32_t canonical) const;

    const std::vector<std::pair<std::size_t, std::size_t>>& arfe_pairs() const {
        return arfe_pairs_;
    }

private:
    void build_layout();

    AttributeCatalog catalog_;
    EncoderConfig config_;

    // Per attribute, indexed by canonical code (0..n): encoded code.
    std::vector<std::vector<std::int32_t>> remap_;
    std::vector<std::vector<std::int32_t>> inverse_remap_;
    // Per attribute, indexed by canonical code: 1-based cluster id, 0 for NA.
    // Empty vector when the attribute is not clustered.
    std::vector<std::vector<std::int32_t>> cluster_of_;
    std::vector<std::vector<std::string>> cluster_names_; // per attr, by id-1

    std::vector<std::pair<std::size_t, std::size_t>> arfe_pairs_; // (subj, obj)
    // Per ARFE pair: subject canonical code -> object canonical code with the
    // same value name, or -1.
    std::vector<std::vector<std::int32_t>> arfe_match_;
    std::vector<std::size_t> avc_columns_; // clustered attribute indices
    std::vector<std::string> feature_names_;
};

Encoder fit_encoder(const AttributeCatalog& catalog, const EncoderConfig& config);
Encoder extend_catalog(const Encoder& encoder, const std::vector<CatalogAddition>& additions);

// One row per grounded rule; Deny -> 0, distinct Grant permission sets map to
// classes 1.. in first-appearance order.
EncodedDataset encode_dataset(const Encoder& encoder, std::span<const Rule> grounded_rules);

// Permission set for a class index (empty for DENY / index 0).
std::vector<std::string> permissions_of_class(const EncodedDataset& dataset, std::int32_t label);
std::vector<std::string> permissions_of_class_name(const std::string& class_name);

} // namespace pammela
