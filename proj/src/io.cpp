#include "pammela/io.hpp"

#include <algorithm>
#include <map>

#include "pammela/csv.hpp"

namespace pammela::io {

namespace {

std::string decision_word(Decision d) { return d == Decision::Grant ? "GRANT" : "DENY"; }

Decision decision_from_word(const std::string& s, const std::string& where) {
    if (s == "GRANT") return Decision::Grant;
    if (s == "DENY") return Decision::Deny;
    raise(ErrorClass::FormatError, where + ": decision must be GRANT or DENY, got '" + s + "'");
}

std::vector<std::string> split_permissions(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ';') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return canonical_permissions(std::move(out));
}

void check_header(const std::vector<std::string>& header, const AttributeCatalog& catalog,
                  const std::string& path) {
    if (header.size() < catalog.size())
        raise(ErrorClass::FormatError, path + ": header has too few columns");
    for (std::size_t i = 0; i < catalog.size(); ++i)
        if (header[i] != catalog.label(i))
            raise(ErrorClass::FormatError, path + ": column " + std::to_string(i + 1) +
                                               " is '" + header[i] + "', expected '" +
                                               catalog.label(i) + "' (catalog order)");
}

std::string cell(const Value& v, const AttributeCatalog& catalog, std::size_t attr) {
    if (v.is_any()) return "Any";
    return catalog.value_name(attr, v.code());
}

} // namespace

AttributeCatalog load_catalog(const std::string& path) {
    auto rows = csv::parse_file(path);
    if (rows.empty()) raise(ErrorClass::FormatError, path + ": empty catalog file");
    std::size_t start = 0;
    if (rows[0] == std::vector<std::string>{"category", "attribute", "value"}) start = 1;

    std::vector<AttributeDef> defs;
    std::map<std::pair<std::string, std::string>, std::size_t> index;
    for (std::size_t r = start; r < rows.size(); ++r) {
        if (rows[r].size() != 3)
            raise(ErrorClass::FormatError,
                  path + ":" + std::to_string(r + 1) + ": expected category,attribute,value");
        Category cat = category_from_string(rows[r][0]);
        auto key = std::make_pair(rows[r][0], rows[r][1]);
        auto it = index.find(key);
        if (it == index.end()) {
            index.emplace(key, defs.size());
            defs.push_back({rows[r][1], cat, {rows[r][2]}});
        } else {
            defs[it->second].values.push_back(rows[r][2]);
        }
    }
    return AttributeCatalog::from_defs(std::move(defs));
}

void save_catalog(const AttributeCatalog& catalog, const std::string& path) {
    std::string out = "category,attribute,value\n";
    for (std::size_t i = 0; i < catalog.size(); ++i) {
        const AttributeDef& def = catalog.attribute(i);
        for (const std::string& v : def.values)
            out += csv::join_row({to_string(def.category), def.name, v});
    }
    csv::write_file(path, out);
}

Policy load_policy(const std::string& path, const AttributeCatalog& catalog) {
    auto rows = csv::parse_file(path);
    if (rows.empty()) raise(ErrorClass::FormatError, path + ": empty policy file");
    check_header(rows[0], catalog, path);
    if (rows[0].size() != catalog.size() + 2 || rows[0][catalog.size()] != "decision" ||
        rows[0][catalog.size() + 1] != "permissions")
        raise(ErrorClass::FormatError, path + ": expected trailing decision,permissions columns");

    Policy policy;
    policy.catalog = catalog;
    std::vector<std::string> universe;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != catalog.size() + 2)
            raise(ErrorClass::FormatError, path + ":" + std::to_string(r + 1) + ": bad width");
        Rule rule;
        for (std::size_t i = 0; i < catalog.size(); ++i) {
            const std::string& cell = rows[r][i];
            if (cell == "Any") {
                rule.conditions.push_back(Value::any());
            } else {
                std::int32_t code = catalog.code(i, cell);
                rule.conditions.push_back(code == 0 ? Value::na() : Value::named(code));
            }
        }
        rule.decision = decision_from_word(rows[r][catalog.size()],
                                           path + ":" + std::to_string(r + 1));
        rule.permissions = split_permissions(rows[r][catalog.size() + 1]);
        validate_rule(catalog, rule);
        for (const std::string& p : rule.permissions)
            if (std::find(universe.begin(), universe.end(), p) == universe.end())
                universe.push_back(p);
        policy.rules.push_back(std::move(rule));
    }
    policy.permission_universe = std::move(universe);
    policy.validate();
    return policy;
}

void save_policy(const Policy& policy, const std::string& path) {
    std::vector<std::string> header;
    for (std::size_t i = 0; i < policy.catalog.size(); ++i)
        header.push_back(policy.catalog.label(i));
    header.push_back("decision");
    header.push_back("permissions");
    std::string out = csv::join_row(header);
    for (const Rule& rule : policy.rules) {
        std::vector<std::string> row;
        for (std::size_t i = 0; i < rule.conditions.size(); ++i)
            row.push_back(cell(rule.conditions[i], policy.catalog, i));
        row.push_back(decision_word(rule.decision));
        row.push_back(permissions_label(rule.permissions));
        out += csv::join_row(row);
    }
    csv::write_file(path, out);
}

RequestLog load_log(const std::string& path, const AttributeCatalog& catalog) {
    auto rows = csv::parse_file(path);
    if (rows.empty()) raise(ErrorClass::FormatError, path + ": empty log file");
    check_header(rows[0], catalog, path);
    bool has_truth = false;
    if (rows[0].size() == catalog.size() + 2) {
        if (rows[0][catalog.size()] != "truth" ||
            rows[0][catalog.size() + 1] != "truth_permissions")
            raise(ErrorClass::FormatError,
                  path + ": expected truth,truth_permissions columns");
        has_truth = true;
    } else if (rows[0].size() != catalog.size()) {
        raise(ErrorClass::FormatError, path + ": unexpected column count");
    }

    RequestLog log;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size())
            raise(ErrorClass::FormatError, path + ":" + std::to_string(r + 1) + ": bad width");
        RawRequest raw;
        for (std::size_t i = 0; i < catalog.size(); ++i) {
            if (rows[r][i] == "Any")
                raise(ErrorClass::FormatError,
                      path + ":" + std::to_string(r + 1) + ": Any in a request");
            raw.values.push_back(rows[r][i]);
        }
        if (has_truth && !rows[r][catalog.size()].empty()) {
            TruthLabel truth;
            truth.decision = decision_from_word(rows[r][catalog.size()],
                                                path + ":" + std::to_string(r + 1));
            truth.permissions = split_permissions(rows[r][catalog.size() + 1]);
            raw.truth = truth;
        }
        log.entries.push_back(std::move(raw));
    }
    return log;
}

void save_log(const RequestLog& log, const AttributeCatalog& catalog,
              const std::string& path) {
    std::vector<std::string> header;
    for (std::size_t i = 0; i < catalog.size(); ++i) header.push_back(catalog.label(i));
    header.push_back("truth");
    header.push_back("truth_permissions");
    std::string out = csv::join_row(header);
    for (const RawRequest& raw : log.entries) {
        std::vector<std::string> row = raw.values;
        if (raw.truth) {
            row.push_back(decision_word(raw.truth->decision));
            row.push_back(permissions_label(raw.truth->permissions));
        } else {
            row.push_back("");
            row.push_back("");
        }
        out += csv::join_row(row);
    }
    csv::write_file(path, out);
}

std::vector<ClusterAssignment> load_clusters(const std::string& path) {
    auto rows = csv::parse_file(path);
    std::vector<ClusterAssignment> out;
    std::size_t start = 0;
    if (!rows.empty() &&
        rows[0] == std::vector<std::string>{"category", "attribute", "value", "cluster"})
        start = 1;
    for (std::size_t r = start; r < rows.size(); ++r) {
        if (rows[r].size() != 4)
            raise(ErrorClass::FormatError,
                  path + ":" + std::to_string(r + 1) + ": expected category,attribute,value,cluster");
        out.push_back({category_from_string(rows[r][0]), rows[r][1], rows[r][2], rows[r][3]});
    }
    return out;
}

void save_clusters(const std::vector<ClusterAssignment>& clusters, const std::string& path) {
    std::string out = "category,attribute,value,cluster\n";
    for (const ClusterAssignment& a : clusters)
        out += csv::join_row({to_string(a.category), a.attribute, a.value, a.cluster});
    csv::write_file(path, out);
}

EncoderConfig make_encoder_config(const std::string& strategy,
                                  const std::vector<ClusterAssignment>& clusters,
                                  const AttributeCatalog& catalog) {
    EncoderConfig config;
    if (strategy == "naive") {
    } else if (strategy == "arfe") {
        config.arfe = true;
    } else if (strategy == "avc") {
        config.avc = true;
    } else if (strategy == "arfe+avc") {
        config.arfe = true;
        config.avc = true;
    } else {
        raise(ErrorClass::InvalidSpec, "unknown strategy '" + strategy + "'");
    }
    for (const ClusterAssignment& a : clusters) {
        auto attr = catalog.find(a.category, a.attribute);
        bool known = attr && catalog.try_code(*attr, a.value).has_value();
        if (known) config.clusters.push_back(a);
        else config.pending_clusters.push_back(a);
    }
    return config;
}

void save_encoded(const EncodedDataset& dataset, const std::string& path) {
    std::vector<std::string> header = dataset.feature_names;
    header.push_back("label");
    std::string out = csv::join_row(header);
    for (const FeatureRow& row : dataset.rows) {
        std::vector<std::string> cells;
        cells.reserve(row.features.size() + 1);
        for (std::int32_t f : row.features) cells.push_back(std::to_string(f));
        cells.push_back(std::to_string(row.label));
        out += csv::join_row(cells);
    }
    csv::write_file(path, out);
}

} // namespace pammela::io
