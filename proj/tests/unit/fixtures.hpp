#pragma once

#include <vector>

#include "gravelai/reward_models.hpp"
#include "gravelai/tree_graph.hpp"

namespace fixtures {

// Five-arm line with modes at arms 2 and 4 (0-based), unit-variance Gaussian.
inline gravelai::Instance line_five() {
    return gravelai::Instance(gravelai::line_tree(5), {1, 2, 4, 2, 3}, 2, gravelai::RewardModel::gaussian());
}

inline std::vector<double> line_five_eta() { return {0.01, 0.25, 1, 0.25, 1}; }

}  // namespace fixtures
