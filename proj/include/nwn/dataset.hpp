#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "nwn/error.hpp"
#include "nwn/sparse.hpp"

namespace nwn {

/// Feature vectors with class indices in [0, n_classes).
struct Dataset {
    std::vector<SparseVector> x;
    std::vector<int> y;
    std::size_t n_features = 0;
    std::size_t n_classes = 2;

    std::size_t size() const noexcept { return x.size(); }

    std::vector<std::size_t> class_counts() const {
        std::vector<std::size_t> counts(n_classes, 0);
        for (int c : y) ++counts[static_cast<std::size_t>(c)];
        return counts;
    }

    /// Shape checks shared by every trainer: matching lengths, labels in
    /// range, well-formed vectors, and at least two classes present.
    void validate_for_training() const {
        if (x.size() != y.size()) throw DataError("feature/label count mismatch");
        if (n_features == 0) throw DataError("dataset has no features");
        for (int c : y)
            if (c < 0 || static_cast<std::size_t>(c) >= n_classes)
                throw DataError("class index " + std::to_string(c) + " out of range");
        for (std::size_t i = 0; i < x.size(); ++i) {
            for (const auto& e : x[i].entries)
                if (!std::isfinite(e.weight)) throw DataError("non-finite feature value in row " + std::to_string(i));
            if (!x[i].well_formed(n_features)) throw DataError("malformed sparse vector in row " + std::to_string(i));
        }
        std::size_t present = 0;
        for (auto n : class_counts()) present += n > 0 ? 1 : 0;
        if (present < 2) throw TrainingError("training data must contain at least two classes");
    }
};

}  // namespace nwn
