#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace nwn {

/// One vectorized document: (feature index, weight) pairs, indices strictly
/// increasing. Absent indices read as 0.
struct SparseVector {
    struct Entry {
        std::uint32_t index;
        double weight;

        friend bool operator==(const Entry&, const Entry&) = default;
    };

    std::vector<Entry> entries;

    std::size_t nnz() const noexcept { return entries.size(); }
    bool empty() const noexcept { return entries.empty(); }

    double value_at(std::uint32_t index) const noexcept {
        auto it = std::lower_bound(entries.begin(), entries.end(), index,
                                   [](const Entry& e, std::uint32_t i) { return e.index < i; });
        return (it != entries.end() && it->index == index) ? it->weight : 0.0;
    }

    double dot(std::span<const double> dense) const noexcept {
        double s = 0.0;
        for (const auto& e : entries) s += e.weight * dense[e.index];
        return s;
    }

    double squared_norm() const noexcept {
        double s = 0.0;
        for (const auto& e : entries) s += e.weight * e.weight;
        return s;
    }

    /// True when indices are strictly increasing, below `n_features`, and
    /// weights are finite.
    bool well_formed(std::size_t n_features) const noexcept {
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (entries[i].index >= n_features || !std::isfinite(entries[i].weight)) return false;
            if (i > 0 && entries[i - 1].index >= entries[i].index) return false;
        }
        return true;
    }

    friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

inline void l2_normalize(SparseVector& v) {
    const double n = std::sqrt(v.squared_norm());
    if (n > 0.0)
        for (auto& e : v.entries) e.weight /= n;
}

}  // namespace nwn
