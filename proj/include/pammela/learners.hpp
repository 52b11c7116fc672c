#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pammela/encoding.hpp"

namespace pammela {

struct LearnerSpec {
    enum class Kind { DecisionTree, RandomForest, ExtraTrees, GradientBoosting };
    enum class FeatureSubsample { All, Sqrt, Fraction };

    Kind kind = Kind::DecisionTree;
    int max_depth = 0;          // 0 = unlimited
    int min_samples_split = 2;
    int n_trees = 100;          // RF / ET
    FeatureSubsample subsample = FeatureSubsample::All;
    double subsample_fraction = 1.0;
    double learning_rate = 0.1; // GB
    int n_stages = 100;         // GB
    int gb_tree_depth = 3;      // depth of GB stage trees
    std::optional<std::uint64_t> seed; // mandatory for ensemble kinds

    static LearnerSpec defaults(Kind kind, std::optional<std::uint64_t> seed = std::nullopt);
    void validate() const; // InvalidSpec on bad hyperparameters
};

const char* to_string(LearnerSpec::Kind kind);
LearnerSpec::Kind learner_kind_from_string(const std::string& s);

// Reads `key=value` lines (# comments): kind, max_depth, min_samples_split,
// n_trees, subsample, learning_rate, n_stages, gb_tree_depth, seed.
LearnerSpec learner_spec_from_config(const std::string& path);

// Flattened classification tree. Splits send feature <= threshold left.
struct ClassTree {
    struct Node {
        std::int32_t feature = -1;   // -1 = leaf
        std::int32_t threshold = 0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::int32_t klass = -1;     // leaf only
        std::int32_t prob_offset = -1;
    };
    std::vector<Node> nodes;
    std::vector<double> leaf_probs; // n_classes per leaf, at prob_offset
};

// Regression tree for boosting stages.
struct RegTree {
    struct Node {
        std::int32_t feature = -1;
        std::int32_t threshold = 0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        double value = 0.0;
    };
    std::vector<Node> nodes;
};

struct TrainedModel {
    LearnerSpec::Kind kind = LearnerSpec::Kind::DecisionTree;
    std::uint64_t catalog_hash = 0;
    std::int32_t n_features = 0;
    std::vector<std::string> class_names;

    // Single class seen in training: constant model, flagged.
    bool degenerate = false;
    std::int32_t degenerate_class = 0;

    std::vector<ClassTree> trees;             // DT (1) / RF / ET
    std::vector<std::vector<RegTree>> stages; // GB: [stage][class]
    double learning_rate = 0.1;

    std::size_t n_classes() const { return class_names.size(); }
};

struct Prediction {
    std::int32_t klass = 0;
    std::vector<double> probabilities;
};

// 1 - sum p_i^2 over label counts. EmptyPartition when all counts are zero.
double gini(std::span<const long long> label_counts);

// Deterministic given (spec, data, seed): exact integer split scoring, fixed
// tie-breaks (lowest feature, lowest threshold, lowest class), per-tree
// derived seeds with order-independent aggregation.
TrainedModel train(const LearnerSpec& spec, const EncodedDataset& data);

Prediction predict(const TrainedModel& model, std::span<const std::int32_t> row);

// ── Serialization: versioned, self-describing, bit-exact round-trip ─────────

void save_model(const TrainedModel& model, std::ostream& out);
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(std::istream& in);
TrainedModel load_model(const std::string& path);
std::string model_bytes(const TrainedModel& model);

} // namespace pammela
