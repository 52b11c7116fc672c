#pragma once

#include <string>
#include <vector>

#include "pammela/abac.hpp"
#include "pammela/encoding.hpp"

namespace pammela::io {

// Catalog file: `category,attribute,value` rows in code order.
AttributeCatalog load_catalog(const std::string& path);
void save_catalog(const AttributeCatalog& catalog, const std::string& path);

// Policy file: header `S_<attr>,...,O_<attr>,...,decision,permissions`;
// cells are value names, NA or Any; decision GRANT/DENY; permissions
// ';'-separated, empty for DENY. Columns must match catalog order.
Policy load_policy(const std::string& path, const AttributeCatalog& catalog);
void save_policy(const Policy& policy, const std::string& path);

// Request log: policy columns minus permissions, plus optional `truth` and
// `truth_permissions`.
RequestLog load_log(const std::string& path, const AttributeCatalog& catalog);
void save_log(const RequestLog& log, const AttributeCatalog& catalog,
              const std::string& path);

// Cluster file: `category,attribute,value,cluster`.
std::vector<ClusterAssignment> load_clusters(const std::string& path);
void save_clusters(const std::vector<ClusterAssignment>& clusters, const std::string& path);

// Splits cluster assignments into (catalog values, pending values) and fills
// an EncoderConfig for a strategy name: naive | arfe | avc | arfe+avc.
EncoderConfig make_encoder_config(const std::string& strategy,
                                  const std::vector<ClusterAssignment>& clusters,
                                  const AttributeCatalog& catalog);

// Encoded dataset export: feature names + label column.
void save_encoded(const EncodedDataset& dataset, const std::string& path);

} // namespace pammela::io
