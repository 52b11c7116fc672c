#include "pammela/learners.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include "pammela/config.hpp"
#include "pammela/random.hpp"

namespace pammela {

LearnerSpec LearnerSpec::defaults(Kind kind, std::optional<std::uint64_t> seed) {
    LearnerSpec spec;
    spec.kind = kind;
    spec.seed = seed;
    switch (kind) {
        case Kind::DecisionTree:
            break;
        case Kind::RandomForest:
        case Kind::ExtraTrees:
            spec.n_trees = 100;
            spec.subsample = FeatureSubsample::Sqrt;
            break;
        case Kind::GradientBoosting:
            spec.n_stages = 100;
            spec.learning_rate = 0.1;
            spec.gb_tree_depth = 3;
            break;
    }
    return spec;
}

void LearnerSpec::validate() const {
    if (max_depth < 0 || min_samples_split < 2 || n_trees < 1 || n_stages < 1 ||
        gb_tree_depth < 1)
        raise(ErrorClass::InvalidSpec, "hyperparameter counts must be positive");
    if (!(learning_rate > 0.0 && learning_rate <= 1.0))
        raise(ErrorClass::InvalidSpec, "learning_rate must be in (0, 1]");
    if (subsample == FeatureSubsample::Fraction &&
        !(subsample_fraction > 0.0 && subsample_fraction <= 1.0))
        raise(ErrorClass::InvalidSpec, "subsample_fraction must be in (0, 1]");
    if (kind != Kind::DecisionTree && !seed)
        raise(ErrorClass::InvalidSpec,
              std::string(to_string(kind)) + " requires an explicit seed");
}

const char* to_string(LearnerSpec::Kind kind) {
    switch (kind) {
        case LearnerSpec::Kind::DecisionTree: return "dt";
        case LearnerSpec::Kind::RandomForest: return "rf";
        case LearnerSpec::Kind::ExtraTrees: return "et";
        case LearnerSpec::Kind::GradientBoosting: return "gb";
    }
    return "?";
}

LearnerSpec::Kind learner_kind_from_string(const std::string& s) {
    if (s == "dt" || s == "decision-tree") return LearnerSpec::Kind::DecisionTree;
    if (s == "rf" || s == "random-forest") return LearnerSpec::Kind::RandomForest;
    if (s == "et" || s == "extra-trees") return LearnerSpec::Kind::ExtraTrees;
    if (s == "gb" || s == "gradient-boosting") return LearnerSpec::Kind::GradientBoosting;
    raise(ErrorClass::InvalidSpec, "unknown learner '" + s + "'");
}

LearnerSpec learner_spec_from_config(const std::string& path) {
    auto kv = parse_kv_file(path);
    auto it = kv.find("kind");
    if (it == kv.end()) raise(ErrorClass::InvalidSpec, path + ": missing 'kind'");
    LearnerSpec spec = LearnerSpec::defaults(learner_kind_from_string(it->second));
    for (const auto& [key, value] : kv) {
        if (key == "kind") continue;
        else if (key == "max_depth") spec.max_depth = std::stoi(value);
        else if (key == "min_samples_split") spec.min_samples_split = std::stoi(value);
        else if (key == "n_trees") spec.n_trees = std::stoi(value);
        else if (key == "learning_rate") spec.learning_rate = std::stod(value);
        else if (key == "n_stages") spec.n_stages = std::stoi(value);
        else if (key == "gb_tree_depth") spec.gb_tree_depth = std::stoi(value);
        else if (key == "seed") spec.seed = std::stoull(value);
        else if (key == "subsample") {
            if (value == "all") spec.subsample = LearnerSpec::FeatureSubsample::All;
            else if (value == "sqrt") spec.subsample = LearnerSpec::FeatureSubsample::Sqrt;
            else {
                spec.subsample = LearnerSpec::FeatureSubsample::Fraction;
                spec.subsample_fraction = std::stod(value);
            }
        } else {
            raise(ErrorClass::InvalidSpec, path + ": unknown key '" + key + "'");
        }
    }
    spec.validate();
    return spec;
}

double gini(std::span<const long long> label_counts) {
    long long total = 0;
    for (long long c : label_counts) {
        if (c < 0) raise(ErrorClass::InvalidSpec, "negative label count");
        total += c;
    }
    if (total == 0) raise(ErrorClass::EmptyPartition, "gini of an empty partition");
    double sum_sq = 0.0;
    for (long long c : label_counts) {
        double p = static_cast<double>(c) / static_cast<double>(total);
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

// ── Classification tree growth ───────────────────────────────────────────────
//
// Split candidates are integer thresholds over the values present at a node.
// Candidate scoring is exact: maximizing sum_l^2/n_l + sum_r^2/n_r over label
// count squares, compared via 128-bit cross multiplication, so equal-gain ties
// resolve by lowest feature then lowest threshold with no float wobble.

namespace {

using u128 = unsigned __int128;

struct SplitScore {
    unsigned long long num = 0; // sum_l * n_r + sum_r * n_l (see below)
    unsigned long long den = 1; // n_l * n_r

    // a/b > c/d with all operands >= 0
    static bool greater(unsigned long long a, unsigned long long b,
                        unsigned long long c, unsigned long long d) {
        return static_cast<u128>(a) * d > static_cast<u128>(c) * b;
    }
};

struct NodeTask {
    std::vector<std::uint32_t> samples;
    int depth = 0;
    std::int32_t node = 0;
};

class ClassTreeBuilder {
public:
    ClassTreeBuilder(const EncodedDataset& data, const LearnerSpec& spec,
                     std::size_t n_classes, std::vector<std::int32_t> feature_max,
                     bool randomized_thresholds, bool subsample_features,
                     std::uint64_t seed)
        : data_(data), spec_(spec), n_classes_(n_classes),
          feature_max_(std::move(feature_max)),
          randomized_(randomized_thresholds), subsample_(subsample_features),
          rng_(seed) {
        counts_.resize(n_classes_);
    }

    ClassTree build(std::vector<std::uint32_t> samples) {
        ClassTree tree;
        std::vector<NodeTask> stack;
        tree.nodes.emplace_back();
        stack.push_back({std::move(samples), 0, 0});
        while (!stack.empty()) {
            NodeTask task = std::move(stack.back());
            stack.pop_back();
            grow(tree, stack, std::move(task));
        }
        return tree;
    }

private:
    struct BestSplit {
        bool found = false;
        int feature = -1;
        std::int32_t threshold = 0;
        unsigned long long score_num = 0;
        unsigned long long score_den = 1;
    };

    void leaf(ClassTree& tree, std::int32_t node,
              const std::vector<long long>& counts, long long total) {
        std::int32_t best = 0;
        long long best_count = -1;
        for (std::size_t k = 0; k < n_classes_; ++k) {
            if (counts[k] > best_count) {
                best_count = counts[k];
                best = static_cast<std::int32_t>(k);
            }
        }
        tree.nodes[static_cast<std::size_t>(node)].klass = best;
        tree.nodes[static_cast<std::size_t>(node)].prob_offset =
            static_cast<std::int32_t>(tree.leaf_probs.size());
        for (std::size_t k = 0; k < n_classes_; ++k)
            tree.leaf_probs.push_back(static_cast<double>(counts[k]) /
                                      static_cast<double>(total));
    }

    // Candidate features for this node, ascending.
    std::vector<int> candidate_features() {
        int f = static_cast<int>(data_.n_features());
        if (!subsample_) {
            std::vector<int> all(static_cast<std::size_t>(f));
            for (int i = 0; i < f; ++i) all[static_cast<std::size_t>(i)] = i;
            return all;
        }
        int k = f;
        switch (spec_.subsample) {
            case LearnerSpec::FeatureSubsample::All: break;
            case LearnerSpec::FeatureSubsample::Sqrt:
                k = std::max(1, static_cast<int>(std::lround(std::ceil(std::sqrt(f)))));
                break;
            case LearnerSpec::FeatureSubsample::Fraction:
                k = std::max(1, static_cast<int>(std::lround(
                                    std::ceil(spec_.subsample_fraction * f))));
                break;
        }
        k = std::min(k, f);
        std::vector<int> pool(static_cast<std::size_t>(f));
        for (int i = 0; i < f; ++i) pool[static_cast<std::size_t>(i)] = i;
        for (int i = 0; i < k; ++i) {
            std::size_t j = static_cast<std::size_t>(i) +
                            static_cast<std::size_t>(rng_.below(
                                static_cast<std::uint64_t>(f - i)));
            std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
        }
        pool.resize(static_cast<std::size_t>(k));
        std::sort(pool.begin(), pool.end());
        return pool;
    }

    // Maximizes sum_l^2/n_l + sum_r^2/n_r. By concavity no split increases the
    // weighted impurity; zero-gain splits are still taken on impure nodes so
    // jointly-separable (XOR-like) label structure gets memorized, as the
    // reference splitters do.
    BestSplit search_exhaustive(const std::vector<std::uint32_t>& samples,
                                const std::vector<long long>& totals,
                                const std::vector<int>& features) {
        BestSplit best;
        unsigned long long n = samples.size();

        for (int f : features) {
            std::int32_t maxv = feature_max_[static_cast<std::size_t>(f)];
            auto& buckets = bucket_scratch_;
            buckets.assign(static_cast<std::size_t>(maxv + 1) * n_classes_, 0);
            std::int32_t lo = maxv, hi = 0;
            for (std::uint32_t s : samples) {
                std::int32_t v = data_.rows[s].features[static_cast<std::size_t>(f)];
                ++buckets[static_cast<std::size_t>(v) * n_classes_ +
                          static_cast<std::size_t>(data_.rows[s].label)];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (lo == hi) continue;

            std::vector<long long> left(n_classes_, 0);
            unsigned long long left_sq = 0, n_left = 0;
            for (std::int32_t t = lo; t < hi; ++t) {
                const long long* b = &buckets[static_cast<std::size_t>(t) * n_classes_];
                for (std::size_t k = 0; k < n_classes_; ++k) {
                    if (!b[k]) continue;
                    // incremental sum of squares: (x+d)^2 - x^2 = d(2x+d)
                    left_sq += static_cast<unsigned long long>(b[k]) *
                               static_cast<unsigned long long>(2 * left[k] + b[k]);
                    left[k] += b[k];
                    n_left += static_cast<unsigned long long>(b[k]);
                }
                if (n_left == 0 || n_left == n) continue;
                unsigned long long n_right = n - n_left;
                unsigned long long right_sq = 0;
                for (std::size_t k = 0; k < n_classes_; ++k) {
                    long long r = totals[k] - left[k];
                    right_sq += static_cast<unsigned long long>(r) *
                                static_cast<unsigned long long>(r);
                }
                // score = left_sq/n_left + right_sq/n_right, exact
                unsigned long long num = left_sq * n_right + right_sq * n_left;
                unsigned long long den = n_left * n_right;
                if (!best.found ||
                    SplitScore::greater(num, den, best.score_num, best.score_den)) {
                    best = {true, f, t, num, den};
                }
            }
        }
        return best;
    }

    BestSplit search_randomized(const std::vector<std::uint32_t>& samples,
                                const std::vector<long long>& totals,
                                const std::vector<int>& features) {
        BestSplit best;
        unsigned long long n = samples.size();

        for (int f : features) {
            std::int32_t lo = INT32_MAX, hi = INT32_MIN;
            for (std::uint32_t s : samples) {
                std::int32_t v = data_.rows[s].features[static_cast<std::size_t>(f)];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (lo == hi) continue;
            auto t = static_cast<std::int32_t>(
                rng_.between(lo, static_cast<std::int64_t>(hi) - 1));

            std::vector<long long> left(n_classes_, 0);
            unsigned long long n_left = 0;
            for (std::uint32_t s : samples) {
                if (data_.rows[s].features[static_cast<std::size_t>(f)] <= t) {
                    ++left[static_cast<std::size_t>(data_.rows[s].label)];
                    ++n_left;
                }
            }
            if (n_left == 0 || n_left == n) continue;
            unsigned long long n_right = n - n_left;
            unsigned long long left_sq = 0, right_sq = 0;
            for (std::size_t k = 0; k < n_classes_; ++k) {
                left_sq += static_cast<unsigned long long>(left[k]) *
                           static_cast<unsigned long long>(left[k]);
                long long r = totals[k] - left[k];
                right_sq += static_cast<unsigned long long>(r) *
                            static_cast<unsigned long long>(r);
            }
            unsigned long long num = left_sq * n_right + right_sq * n_left;
            unsigned long long den = n_left * n_right;
            if (!best.found ||
                SplitScore::greater(num, den, best.score_num, best.score_den)) {
                best = {true, f, t, num, den};
            }
        }
        return best;
    }

    void grow(ClassTree& tree, std::vector<NodeTask>& stack, NodeTask task) {
        auto& counts = counts_;
        std::fill(counts.begin(), counts.end(), 0);
        for (std::uint32_t s : task.samples)
            ++counts[static_cast<std::size_t>(data_.rows[s].label)];
        auto total = static_cast<long long>(task.samples.size());

        bool pure = false;
        for (std::size_t k = 0; k < n_classes_; ++k)
            if (counts[k] == total) { pure = true; break; }

        if (pure || total < spec_.min_samples_split ||
            (spec_.max_depth > 0 && task.depth >= spec_.max_depth)) {
            leaf(tree, task.node, counts, total);
            return;
        }

        std::vector<int> features = candidate_features();
        BestSplit best = randomized_ ? search_randomized(task.samples, counts, features)
                                     : search_exhaustive(task.samples, counts, features);
        if (!best.found && subsample_ && !randomized_) {
            // Sampled features were all constant; fall back to the full set so
            // a splittable node is never forced into an impure leaf.
            std::vector<int> all(data_.n_features());
            for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
            best = search_exhaustive(task.samples, counts, all);
        }
        if (!best.found) {
            leaf(tree, task.node, counts, total);
            return;
        }

        std::vector<std::uint32_t> left, right;
        left.reserve(task.samples.size());
        right.reserve(task.samples.size());
        for (std::uint32_t s : task.samples) {
            if (data_.rows[s].features[static_cast<std::size_t>(best.feature)] <=
                best.threshold)
                left.push_back(s);
            else
                right.push_back(s);
        }

        std::int32_t left_id = static_cast<std::int32_t>(tree.nodes.size());
        std::int32_t right_id = left_id + 1;
        {
            auto& node = tree.nodes[static_cast<std::size_t>(task.node)];
            node.feature = best.feature;
            node.threshold = best.threshold;
            node.left = left_id;
            node.right = right_id;
        }
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        // Right pushed first so the left child grows (and numbers) first.
        stack.push_back({std::move(right), task.depth + 1, right_id});
        stack.push_back({std::move(left), task.depth + 1, left_id});
    }

    const EncodedDataset& data_;
    const LearnerSpec& spec_;
    std::size_t n_classes_;
    std::vector<std::int32_t> feature_max_;
    bool randomized_;
    bool subsample_;
    Rng rng_;
    std::vector<long long> counts_;
    std::vector<long long> bucket_scratch_;
};

std::vector<std::int32_t> feature_maxima(const EncodedDataset& data) {
    std::vector<std::int32_t> maxima(data.n_features(), 0);
    for (const FeatureRow& row : data.rows)
        for (std::size_t f = 0; f < maxima.size(); ++f)
            maxima[f] = std::max(maxima[f], row.features[f]);
    return maxima;
}

// ── Regression tree growth (boosting stages) ─────────────────────────────────

class RegTreeBuilder {
public:
    RegTreeBuilder(const EncodedDataset& data, const std::vector<double>& targets,
                   int max_depth, int min_samples_split,
                   const std::vector<std::int32_t>& feature_max, std::size_t n_classes)
        : data_(data), targets_(targets), max_depth_(max_depth),
          min_split_(min_samples_split), feature_max_(feature_max),
          n_classes_(n_classes) {}

    RegTree build(const std::vector<std::uint32_t>& samples) {
        RegTree tree;
        tree.nodes.emplace_back();
        grow(tree, samples, 0, 0);
        return tree;
    }

private:
    double leaf_value(const std::vector<std::uint32_t>& samples) const {
        // Friedman's multinomial step: (K-1)/K * sum r / sum |r|(1-|r|)
        double num = 0.0, den = 0.0;
        for (std::uint32_t s : samples) {
            double r = targets_[s];
            num += r;
            den += std::fabs(r) * (1.0 - std::fabs(r));
        }
        if (den < 1e-12) return 0.0;
        double k = static_cast<double>(n_classes_);
        return (k - 1.0) / k * num / den;
    }

    void grow(RegTree& tree, const std::vector<std::uint32_t>& samples, int depth,
              std::int32_t node) {
        double total_sum = 0.0;
        for (std::uint32_t s : samples) total_sum += targets_[s];
        auto n = static_cast<double>(samples.size());

        bool can_split = depth < max_depth_ &&
                         samples.size() >= static_cast<std::size_t>(min_split_);
        int best_feature = -1;
        std::int32_t best_threshold = 0;
        double best_score = total_sum * total_sum / n; // parent SSE proxy
        bool improved = false;

        if (can_split) {
            for (std::size_t f = 0; f < data_.n_features(); ++f) {
                std::int32_t maxv = feature_max_[f];
                sums_.assign(static_cast<std::size_t>(maxv + 1), 0.0);
                counts_.assign(static_cast<std::size_t>(maxv + 1), 0);
                std::int32_t lo = maxv, hi = 0;
                for (std::uint32_t s : samples) {
                    std::int32_t v = data_.rows[s].features[f];
                    sums_[static_cast<std::size_t>(v)] += targets_[s];
                    ++counts_[static_cast<std::size_t>(v)];
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
                if (lo == hi) continue;
                double left_sum = 0.0;
                long long left_n = 0;
                for (std::int32_t t = lo; t < hi; ++t) {
                    left_sum += sums_[static_cast<std::size_t>(t)];
                    left_n += counts_[static_cast<std::size_t>(t)];
                    if (left_n == 0 || left_n == static_cast<long long>(samples.size()))
                        continue;
                    double right_sum = total_sum - left_sum;
                    auto right_n = static_cast<double>(samples.size()) -
                                   static_cast<double>(left_n);
                    double score = left_sum * left_sum / static_cast<double>(left_n) +
                                   right_sum * right_sum / right_n;
                    if (score > best_score + 1e-12) {
                        best_score = score;
                        best_feature = static_cast<int>(f);
                        best_threshold = t;
                        improved = true;
                    }
                }
            }
        }

        if (!improved) {
            tree.nodes[static_cast<std::size_t>(node)].value = leaf_value(samples);
            return;
        }

        std::vector<std::uint32_t> left, right;
        for (std::uint32_t s : samples) {
            if (data_.rows[s].features[static_cast<std::size_t>(best_feature)] <=
                best_threshold)
                left.push_back(s);
            else
                right.push_back(s);
        }

        std::int32_t left_id, right_id;
        {
            auto& nd = tree.nodes[static_cast<std::size_t>(node)];
            nd.feature = best_feature;
            nd.threshold = best_threshold;
            left_id = nd.left = static_cast<std::int32_t>(tree.nodes.size());
        }
        tree.nodes.emplace_back();
        {
            auto& nd = tree.nodes[static_cast<std::size_t>(node)];
            right_id = nd.right = static_cast<std::int32_t>(tree.nodes.size());
        }
        tree.nodes.emplace_back();
        grow(tree, left, depth + 1, left_id);
        grow(tree, right, depth + 1, right_id);
    }

    const EncodedDataset& data_;
    const std::vector<double>& targets_;
    int max_depth_;
    int min_split_;
    const std::vector<std::int32_t>& feature_max_;
    std::size_t n_classes_;
    std::vector<double> sums_;
    std::vector<long long> counts_;
};

std::vector<ClassTree> grow_forest(const EncodedDataset& data, const LearnerSpec& spec,
                                   std::size_t n_classes,
                                   const std::vector<std::int32_t>& feature_max,
                                   bool bootstrap, bool randomized) {
    std::size_t n_trees = spec.kind == LearnerSpec::Kind::DecisionTree
                              ? 1
                              : static_cast<std::size_t>(spec.n_trees);
    std::uint64_t base_seed = spec.seed.value_or(0);
    bool subsample = spec.kind != LearnerSpec::Kind::DecisionTree;

    auto grow_one = [&](std::size_t t) {
        std::uint64_t tree_seed = mix64(base_seed ^ (0x51ed2700ULL + t));
        Rng rng(tree_seed);
        std::vector<std::uint32_t> samples;
        samples.reserve(data.rows.size());
        if (bootstrap) {
            for (std::size_t i = 0; i < data.rows.size(); ++i)
                samples.push_back(static_cast<std::uint32_t>(rng.below(data.rows.size())));
        } else {
            for (std::size_t i = 0; i < data.rows.size(); ++i)
                samples.push_back(static_cast<std::uint32_t>(i));
        }
        ClassTreeBuilder builder(data, spec, n_classes, feature_max, randomized,
                                 subsample, mix64(tree_seed + 1));
        return builder.build(std::move(samples));
    };

    std::vector<ClassTree> trees(n_trees);
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (n_trees <= 1 || hw <= 1) {
        for (std::size_t t = 0; t < n_trees; ++t) trees[t] = grow_one(t);
        return trees;
    }
    // Per-tree seeds make results independent of scheduling; collection is in
    // tree order.
    std::size_t n_workers = std::min<std::size_t>(hw, n_trees);
    std::vector<std::future<void>> workers;
    std::atomic<std::size_t> next{0};
    for (std::size_t w = 0; w < n_workers; ++w) {
        workers.push_back(std::async(std::launch::async, [&]() {
            for (;;) {
                std::size_t t = next.fetch_add(1);
                if (t >= n_trees) break;
                trees[t] = grow_one(t);
            }
        }));
    }
    for (auto& f : workers) f.get();
    return trees;
}

} // namespace

// ── train / predict ──────────────────────────────────────────────────────────

TrainedModel train(const LearnerSpec& spec, const EncodedDataset& data) {
    spec.validate();
    if (data.rows.empty()) raise(ErrorClass::EmptyDataset, "no training rows");
    for (const FeatureRow& row : data.rows)
        if (row.features.size() != data.n_features() || row.label < 0 ||
            static_cast<std::size_t>(row.label) >= data.n_classes())
            raise(ErrorClass::WidthMismatch, "malformed training row");

    TrainedModel model;
    model.kind = spec.kind;
    model.n_features = static_cast<std::int32_t>(data.n_features());
    model.class_names = data.class_names;
    model.learning_rate = spec.learning_rate;

    std::vector<long long> class_counts(data.n_classes(), 0);
    for (const FeatureRow& row : data.rows)
        ++class_counts[static_cast<std::size_t>(row.label)];
    std::size_t present = 0;
    std::int32_t only_class = 0;
    for (std::size_t k = 0; k < class_counts.size(); ++k) {
        if (class_counts[k] > 0) {
            ++present;
            only_class = static_cast<std::int32_t>(k);
        }
    }
    if (present < 2) {
        // Degenerate data (e.g. an all-deny policy): constant model, flagged.
        model.degenerate = true;
        model.degenerate_class = only_class;
        return model;
    }

    std::vector<std::int32_t> feature_max = feature_maxima(data);

    switch (spec.kind) {
        case LearnerSpec::Kind::DecisionTree:
            model.trees = grow_forest(data, spec, data.n_classes(), feature_max,
                                      /*bootstrap=*/false, /*randomized=*/false);
            break;
        case LearnerSpec::Kind::RandomForest:
            model.trees = grow_forest(data, spec, data.n_classes(), feature_max,
                                      /*bootstrap=*/true, /*randomized=*/false);
            break;
        case LearnerSpec::Kind::ExtraTrees:
            model.trees = grow_forest(data, spec, data.n_classes(), feature_max,
                                      /*bootstrap=*/false, /*randomized=*/true);
            break;
        case LearnerSpec::Kind::GradientBoosting: {
            std::size_t n = data.rows.size();
            std::size_t k_classes = data.n_classes();
            std::vector<double> scores(n * k_classes, 0.0);
            std::vector<double> probs(n * k_classes, 0.0);
            std::vector<double> residuals(n, 0.0);
            std::vector<std::uint32_t> all(n);
            for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<std::uint32_t>(i);

            model.stages.reserve(static_cast<std::size_t>(spec.n_stages));
            for (int stage = 0; stage < spec.n_stages; ++stage) {
                for (std::size_t i = 0; i < n; ++i) {
                    double* s = &scores[i * k_classes];
                    double mx = s[0];
                    for (std::size_t k = 1; k < k_classes; ++k) mx = std::max(mx, s[k]);
                    double z = 0.0;
                    for (std::size_t k = 0; k < k_classes; ++k) {
                        probs[i * k_classes + k] = std::exp(s[k] - mx);
                        z += probs[i * k_classes + k];
                    }
                    for (std::size_t k = 0; k < k_classes; ++k)
                        probs[i * k_classes + k] /= z;
                }
                std::vector<RegTree> stage_trees;
                stage_trees.reserve(k_classes);
                for (std::size_t k = 0; k < k_classes; ++k) {
                    for (std::size_t i = 0; i < n; ++i) {
                        double y = data.rows[i].label == static_cast<std::int32_t>(k)
                                       ? 1.0 : 0.0;
                        residuals[i] = y - probs[i * k_classes + k];
                    }
                    RegTreeBuilder builder(data, residuals, spec.gb_tree_depth,
                                           spec.min_samples_split, feature_max,
                                           k_classes);
                    RegTree tree = builder.build(all);
                    for (std::size_t i = 0; i < n; ++i) {
                        const RegTree::Node* nd = &tree.nodes[0];
                        while (nd->feature >= 0) {
                            nd = data.rows[i].features[static_cast<std::size_t>(
                                     nd->feature)] <= nd->threshold
                                     ? &tree.nodes[static_cast<std::size_t>(nd->left)]
                                     : &tree.nodes[static_cast<std::size_t>(nd->right)];
                        }
                        scores[i * k_classes + k] += spec.learning_rate * nd->value;
                    }
                    stage_trees.push_back(std::move(tree));
                }
                model.stages.push_back(std::move(stage_trees));
            }
            break;
        }
    }
    return model;
}

Prediction predict(const TrainedModel& model, std::span<const std::int32_t> row) {
    if (row.size() != static_cast<std::size_t>(model.n_features))
        raise(ErrorClass::WidthMismatch,
              "row width " + std::to_string(row.size()) + ", model expects " +
                  std::to_string(model.n_features));

    std::size_t k_classes = model.n_classes();
    Prediction pred;
    pred.probabilities.assign(k_classes, 0.0);

    if (model.degenerate) {
        pred.klass = model.degenerate_class;
        pred.probabilities[static_cast<std::size_t>(model.degenerate_class)] = 1.0;
        return pred;
    }

    auto argmax = [&](const std::vector<double>& p) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < p.size(); ++k)
            if (p[k] > p[best]) best = k;
        return static_cast<std::int32_t>(best);
    };

    if (model.kind == LearnerSpec::Kind::GradientBoosting) {
        std::vector<double> scores(k_classes, 0.0);
        for (const auto& stage : model.stages) {
            for (std::size_t k = 0; k < k_classes; ++k) {
                const RegTree& tree = stage[k];
                const RegTree::Node* nd = &tree.nodes[0];
                while (nd->feature >= 0) {
                    nd = row[static_cast<std::size_t>(nd->feature)] <= nd->threshold
                             ? &tree.nodes[static_cast<std::size_t>(nd->left)]
                             : &tree.nodes[static_cast<std::size_t>(nd->right)];
                }
                scores[k] += model.learning_rate * nd->value;
            }
        }
        double mx = scores[0];
        for (double s : scores) mx = std::max(mx, s);
        double z = 0.0;
        for (std::size_t k = 0; k < k_classes; ++k) {
            pred.probabilities[k] = std::exp(scores[k] - mx);
            z += pred.probabilities[k];
        }
        for (double& p : pred.probabilities) p /= z;
        pred.klass = argmax(pred.probabilities);
        return pred;
    }

    if (model.kind == LearnerSpec::Kind::DecisionTree) {
        const ClassTree& tree = model.trees[0];
        const ClassTree::Node* nd = &tree.nodes[0];
        while (nd->feature >= 0) {
            nd = row[static_cast<std::size_t>(nd->feature)] <= nd->threshold
                     ? &tree.nodes[static_cast<std::size_t>(nd->left)]
                     : &tree.nodes[static_cast<std::size_t>(nd->right)];
        }
        pred.klass = nd->klass;
        for (std::size_t k = 0; k < k_classes; ++k)
            pred.probabilities[k] =
                tree.leaf_probs[static_cast<std::size_t>(nd->prob_offset) + k];
        return pred;
    }

    // RF / ET: majority vote, probabilities are vote shares.
    for (const ClassTree& tree : model.trees) {
        const ClassTree::Node* nd = &tree.nodes[0];
        while (nd->feature >= 0) {
            nd = row[static_cast<std::size_t>(nd->feature)] <= nd->threshold
                     ? &tree.nodes[static_cast<std::size_t>(nd->left)]
                     : &tree.nodes[static_cast<std::size_t>(nd->right)];
        }
        pred.probabilities[static_cast<std::size_t>(nd->klass)] += 1.0;
    }
    for (double& p : pred.probabilities) p /= static_cast<double>(model.trees.size());
    pred.klass = argmax(pred.probabilities);
    return pred;
}

// ── Serialization ────────────────────────────────────────────────────────────

namespace {

constexpr char kMagic[4] = {'P', 'A', 'M', 'M'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    put_u32(out, static_cast<std::uint32_t>(v));
    put_u32(out, static_cast<std::uint32_t>(v >> 32));
}

void put_i32(std::ostream& out, std::int32_t v) {
    put_u32(out, static_cast<std::uint32_t>(v));
}

void put_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(out, bits);
}

void put_str(std::ostream& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) raise(ErrorClass::FormatError, "truncated model file");
    return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
           static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

std::uint64_t get_u64(std::istream& in) {
    std::uint64_t lo = get_u32(in);
    std::uint64_t hi = get_u32(in);
    return lo | hi << 32;
}

std::int32_t get_i32(std::istream& in) { return static_cast<std::int32_t>(get_u32(in)); }

double get_f64(std::istream& in) {
    std::uint64_t bits = get_u64(in);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

std::string get_str(std::istream& in) {
    std::uint32_t len = get_u32(in);
    std::string s(len, '\0');
    in.read(s.data(), static_cast<std::streamsize>(len));
    if (!in) raise(ErrorClass::FormatError, "truncated model file");
    return s;
}

void put_class_tree(std::ostream& out, const ClassTree& tree) {
    put_u32(out, static_cast<std::uint32_t>(tree.nodes.size()));
    for (const auto& nd : tree.nodes) {
        put_i32(out, nd.feature);
        put_i32(out, nd.threshold);
        put_i32(out, nd.left);
        put_i32(out, nd.right);
        put_i32(out, nd.klass);
        put_i32(out, nd.prob_offset);
    }
    put_u32(out, static_cast<std::uint32_t>(tree.leaf_probs.size()));
    for (double p : tree.leaf_probs) put_f64(out, p);
}

ClassTree get_class_tree(std::istream& in) {
    ClassTree tree;
    tree.nodes.resize(get_u32(in));
    for (auto& nd : tree.nodes) {
        nd.feature = get_i32(in);
        nd.threshold = get_i32(in);
        nd.left = get_i32(in);
        nd.right = get_i32(in);
        nd.klass = get_i32(in);
        nd.prob_offset = get_i32(in);
    }
    tree.leaf_probs.resize(get_u32(in));
    for (double& p : tree.leaf_probs) p = get_f64(in);
    return tree;
}

void put_reg_tree(std::ostream& out, const RegTree& tree) {
    put_u32(out, static_cast<std::uint32_t>(tree.nodes.size()));
    for (const auto& nd : tree.nodes) {
        put_i32(out, nd.feature);
        put_i32(out, nd.threshold);
        put_i32(out, nd.left);
        put_i32(out, nd.right);
        put_f64(out, nd.value);
    }
}

RegTree get_reg_tree(std::istream& in) {
    RegTree tree;
    tree.nodes.resize(get_u32(in));
    for (auto& nd : tree.nodes) {
        nd.feature = get_i32(in);
        nd.threshold = get_i32(in);
        nd.left = get_i32(in);
        nd.right = get_i32(in);
        nd.value = get_f64(in);
    }
    return tree;
}

} // namespace

void save_model(const TrainedModel& model, std::ostream& out) {
    out.write(kMagic, 4);
    put_u32(out, kVersion);
    put_u64(out, model.catalog_hash);
    put_u32(out, static_cast<std::uint32_t>(model.kind));
    put_i32(out, model.n_features);
    put_u32(out, static_cast<std::uint32_t>(model.class_names.size()));
    for (const std::string& s : model.class_names) put_str(out, s);
    put_u32(out, model.degenerate ? 1 : 0);
    put_i32(out, model.degenerate_class);
    put_f64(out, model.learning_rate);
    put_u32(out, static_cast<std::uint32_t>(model.trees.size()));
    for (const ClassTree& t : model.trees) put_class_tree(out, t);
    put_u32(out, static_cast<std::uint32_t>(model.stages.size()));
    for (const auto& stage : model.stages) {
        put_u32(out, static_cast<std::uint32_t>(stage.size()));
        for (const RegTree& t : stage) put_reg_tree(out, t);
    }
}

void save_model(const TrainedModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorClass::IoError, "cannot write " + path);
    save_model(model, out);
    if (!out) raise(ErrorClass::IoError, "short write to " + path);
}

TrainedModel load_model(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        raise(ErrorClass::FormatError, "not a model file");
    if (get_u32(in) != kVersion)
        raise(ErrorClass::FormatError, "unsupported model version");
    TrainedModel model;
    model.catalog_hash = get_u64(in);
    model.kind = static_cast<LearnerSpec::Kind>(get_u32(in));
    model.n_features = get_i32(in);
    model.class_names.resize(get_u32(in));
    for (std::string& s : model.class_names) s = get_str(in);
    model.degenerate = get_u32(in) != 0;
    model.degenerate_class = get_i32(in);
    model.learning_rate = get_f64(in);
    model.trees.resize(get_u32(in));
    for (ClassTree& t : model.trees) t = get_class_tree(in);
    model.stages.resize(get_u32(in));
    for (auto& stage : model.stages) {
        stage.resize(get_u32(in));
        for (RegTree& t : stage) t = get_reg_tree(in);
    }
    return model;
}

TrainedModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorClass::IoError, "cannot open " + path);
    return load_model(in);
}

std::string model_bytes(const TrainedModel& model) {
    std::ostringstream out(std::ios::binary);
    save_model(model, out);
    return out.str();
}

} // namespace pammela
