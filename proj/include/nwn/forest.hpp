#pragma once

// Random forest of binary decision trees split by information gain
// (entropy criterion). Each tree draws its own random stream from
// (seed, tree index), so parallel and sequential builds are identical.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <limits>
#include <random>
#include <vector>

#include "nwn/dataset.hpp"
#include "nwn/error.hpp"
#include "nwn/parallel.hpp"
#include "nwn/sparse.hpp"

namespace nwn {

struct ForestParams {
    std::size_t n_trees = 100;
    std::size_t max_depth = 40;
    std::size_t min_split = 2;
    std::size_t features_per_split = 0;  // 0 selects ceil(sqrt(K))
    bool bootstrap = true;
    std::uint64_t seed = 42;

    static constexpr std::size_t kUnlimitedDepth = std::numeric_limits<std::size_t>::max();

    void validate() const {
        if (n_trees < 1) throw ConfigError("forest needs at least one tree");
        if (min_split < 2) throw ConfigError("forest min_split must be at least 2");
    }
};

struct TreeNode {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;     // x[feature] <= threshold goes left
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::int32_t label = 0;     // majority class at this node

    bool is_leaf() const noexcept { return feature < 0; }
    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    int predict(const SparseVector& x) const {
        std::uint32_t at = 0;
        while (!nodes[at].is_leaf()) {
            const auto& n = nodes[at];
            at = x.value_at(static_cast<std::uint32_t>(n.feature)) <= n.threshold ? n.left : n.right;
        }
        return nodes[at].label;
    }

    /// Edges on the longest root-to-leaf path.
    std::size_t depth() const {
        std::size_t best = 0;
        std::vector<std::pair<std::uint32_t, std::size_t>> stack{{0, 0}};
        while (!stack.empty()) {
            auto [at, d] = stack.back();
            stack.pop_back();
            best = std::max(best, d);
            if (!nodes[at].is_leaf()) {
                stack.emplace_back(nodes[at].left, d + 1);
                stack.emplace_back(nodes[at].right, d + 1);
            }
        }
        return best;
    }

    friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

struct ForestModel {
    std::vector<DecisionTree> trees;
    std::size_t n_classes = 2;
    std::uint64_t seed = 0;

    friend bool operator==(const ForestModel&, const ForestModel&) = default;
};

namespace detail {

inline double entropy(const std::vector<double>& counts, double total) {
    if (total <= 0.0) return 0.0;
    double h = 0.0;
    for (double c : counts)
        if (c > 0.0) {
            const double p = c / total;
            h -= p * std::log2(p);
        }
    return h;
}

/// Lowest class index among those with the largest count.
inline int majority(const std::vector<double>& counts) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < counts.size(); ++c)
        if (counts[c] > counts[best]) best = c;
    return static_cast<int>(best);
}

class TreeBuilder {
public:
    TreeBuilder(const Dataset& data, const std::vector<std::vector<std::pair<std::uint32_t, double>>>& columns,
                const ForestParams& params, std::size_t features_per_split, std::uint64_t tree_seed)
        : data_(data),
          columns_(columns),
          params_(params),
          mtry_(features_per_split),
          multiplicity_(data.size(), 0),
          feature_pool_(data.n_features) {
        rng_.seed(tree_seed);
        for (std::size_t f = 0; f < feature_pool_.size(); ++f) feature_pool_[f] = static_cast<std::uint32_t>(f);
    }

    DecisionTree build() {
        const std::size_t n = data_.size();
        std::vector<std::uint32_t> samples(n);
        if (params_.bootstrap) {
            std::uniform_int_distribution<std::size_t> pick(0, n - 1);
            for (auto& s : samples) s = static_cast<std::uint32_t>(pick(rng_));
        } else {
            for (std::size_t i = 0; i < n; ++i) samples[i] = static_cast<std::uint32_t>(i);
        }

        DecisionTree tree;
        tree.nodes.emplace_back();
        struct Work {
            std::uint32_t node;
            std::size_t begin, end, depth;
        };
        std::vector<Work> stack{{0, 0, n, 0}};
        while (!stack.empty()) {
            const Work w = stack.back();
            stack.pop_back();
            std::vector<double> counts(data_.n_classes, 0.0);
            for (std::size_t i = w.begin; i < w.end; ++i) counts[static_cast<std::size_t>(data_.y[samples[i]])] += 1.0;
            tree.nodes[w.node].label = majority(counts);

            const std::size_t size = w.end - w.begin;
            const bool pure = std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0.0; }) <= 1;
            if (pure || w.depth >= params_.max_depth || size < params_.min_split) continue;

            const auto split = best_split(samples, w.begin, w.end, counts);
            if (split.feature < 0) continue;

            auto mid = std::partition(samples.begin() + static_cast<std::ptrdiff_t>(w.begin),
                                      samples.begin() + static_cast<std::ptrdiff_t>(w.end), [&](std::uint32_t s) {
                                          return data_.x[s].value_at(static_cast<std::uint32_t>(split.feature)) <=
                                                 split.threshold;
                                      });
            const std::size_t cut = static_cast<std::size_t>(mid - samples.begin());
            const auto left = static_cast<std::uint32_t>(tree.nodes.size());
            tree.nodes.emplace_back();
            tree.nodes.emplace_back();
            auto& node = tree.nodes[w.node];
            node.feature = split.feature;
            node.threshold = split.threshold;
            node.left = left;
            node.right = left + 1;
            stack.push_back({left + 1, cut, w.end, w.depth + 1});
            stack.push_back({left, w.begin, cut, w.depth + 1});
        }
        return tree;
    }

private:
    struct Split {
        std::int32_t feature = -1;
        double threshold = 0.0;
        double gain = -1.0;
    };

    struct Item {
        double value;
        std::uint32_t cls;
        double weight;
    };

    Split best_split(const std::vector<std::uint32_t>& samples, std::size_t begin, std::size_t end,
                     const std::vector<double>& counts) {
        const std::size_t size = end - begin;
        const double total = static_cast<double>(size);
        const double parent_h = entropy(counts, total);
        for (std::size_t i = begin; i < end; ++i) ++multiplicity_[samples[i]];

        // Partial Fisher-Yates: the first mtry entries become the sample.
        const std::size_t mtry = std::min(mtry_, feature_pool_.size());
        for (std::size_t j = 0; j < mtry; ++j) {
            std::uniform_int_distribution<std::size_t> pick(j, feature_pool_.size() - 1);
            std::swap(feature_pool_[j], feature_pool_[pick(rng_)]);
        }

        Split best;
        for (std::size_t j = 0; j < mtry; ++j) {
            const std::uint32_t f = feature_pool_[j];
            gather(f, samples, begin, end);
            evaluate(f, counts, total, parent_h, best);
        }
        for (std::size_t i = begin; i < end; ++i) multiplicity_[samples[i]] = 0;
        return best;
    }

    /// Nonzero values of feature f over the node's samples into items_.
    void gather(std::uint32_t f, const std::vector<std::uint32_t>& samples, std::size_t begin, std::size_t end) {
        items_.clear();
        const auto& col = columns_[f];
        const std::size_t size = end - begin;
        if (size * 8 < col.size()) {
            for (std::size_t i = begin; i < end; ++i) {
                const double v = data_.x[samples[i]].value_at(f);
                if (v != 0.0) items_.push_back({v, static_cast<std::uint32_t>(data_.y[samples[i]]), 1.0});
            }
        } else {
            for (const auto& [row, v] : col)
                if (multiplicity_[row] > 0)
                    items_.push_back({v, static_cast<std::uint32_t>(data_.y[row]),
                                      static_cast<double>(multiplicity_[row])});
        }
    }

    void evaluate(std::uint32_t f, const std::vector<double>& counts, double total, double parent_h, Split& best) {
        // Zero block: node counts minus the nonzero items.
        std::vector<double> zero(counts);
        double zero_total = total;
        for (const auto& it : items_) {
            zero[it.cls] -= it.weight;
            zero_total -= it.weight;
        }
        if (zero_total > 0.5) items_.push_back({0.0, 0, 0.0});  // placeholder marking the zero block
        std::sort(items_.begin(), items_.end(), [](const Item& a, const Item& b) { return a.value < b.value; });

        std::vector<double> left(counts.size(), 0.0);
        double left_total = 0.0;
        for (std::size_t i = 0; i < items_.size();) {
            const double v = items_[i].value;
            for (; i < items_.size() && items_[i].value == v; ++i) {
                if (items_[i].weight == 0.0) {
                    for (std::size_t c = 0; c < left.size(); ++c) left[c] += zero[c];
                    left_total += zero_total;
                } else {
                    left[items_[i].cls] += items_[i].weight;
                    left_total += items_[i].weight;
                }
            }
            if (i == items_.size()) break;
            const double right_total = total - left_total;
            std::vector<double> right(counts.size());
            for (std::size_t c = 0; c < right.size(); ++c) right[c] = counts[c] - left[c];
            const double gain = parent_h - (left_total / total) * entropy(left, left_total) -
                                (right_total / total) * entropy(right, right_total);
            if (gain > best.gain) {
                best.gain = gain;
                best.feature = static_cast<std::int32_t>(f);
                best.threshold = v + (items_[i].value - v) / 2.0;
            }
        }
    }

    const Dataset& data_;
    const std::vector<std::vector<std::pair<std::uint32_t, double>>>& columns_;
    const ForestParams& params_;
    std::size_t mtry_;
    std::vector<std::uint32_t> multiplicity_;
    std::vector<std::uint32_t> feature_pool_;
    std::vector<Item> items_;
    std::mt19937_64 rng_;
};

}  // namespace detail

inline ForestModel train_forest(const Dataset& data, const ForestParams& params) {
    params.validate();
    data.validate_for_training();

    // Column-major copy: per feature, (row, value) for nonzero entries.
    std::vector<std::vector<std::pair<std::uint32_t, double>>> columns(data.n_features);
    for (std::size_t i = 0; i < data.size(); ++i)
        for (const auto& e : data.x[i].entries)
            if (e.weight != 0.0) columns[e.index].emplace_back(static_cast<std::uint32_t>(i), e.weight);

    const std::size_t mtry = params.features_per_split > 0
                                 ? params.features_per_split
                                 : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(data.n_features))));

    ForestModel model;
    model.n_classes = data.n_classes;
    model.seed = params.seed;
    model.trees.resize(params.n_trees);
    parallel_for(params.n_trees, [&](std::size_t t) {
        std::seed_seq seq{static_cast<std::uint32_t>(params.seed), static_cast<std::uint32_t>(params.seed >> 32),
                          static_cast<std::uint32_t>(t)};
        std::uint32_t words[2];
        seq.generate(std::begin(words), std::end(words));
        const std::uint64_t tree_seed = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
        detail::TreeBuilder builder(data, columns, params, mtry, tree_seed);
        model.trees[t] = builder.build();
    });
    return model;
}

/// Per-class vote counts.
inline std::vector<std::size_t> forest_votes(const ForestModel& model, const SparseVector& x) {
    std::vector<std::size_t> votes(model.n_classes, 0);
    for (const auto& t : model.trees) ++votes[static_cast<std::size_t>(t.predict(x))];
    return votes;
}

/// Majority vote; ties go to the lowest class index.
inline int predict_forest(const ForestModel& model, const SparseVector& x) {
    const auto votes = forest_votes(model, x);
    std::size_t best = 0;
    for (std::size_t c = 1; c < votes.size(); ++c)
        if (votes[c] > votes[best]) best = c;
    return static_cast<int>(best);
}

}  // namespace nwn
