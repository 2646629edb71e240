#pragma once

#include <span>
#include <utility>
#include <vector>

namespace trackmine {

/// Dense minimum-cost assignment (Kuhn-Munkres with potentials, O(n^2 m)).
/// `cost` is row-major rows x cols with rows <= cols; every row gets a
/// distinct column. Returns the column assigned to each row.
std::vector<int> min_cost_assignment(std::span<const double> cost, int rows, int cols);

struct WeightedEdge {
    int left = 0;
    int right = 0;
    double weight = 0.0;
};

using MatchPairs = std::vector<std::pair<int, int>>;

/// Maximum-weight (not necessarily perfect) bipartite matching over a sparse
/// edge list. Nodes may stay unmatched; edges with non-positive weight are
/// never selected. The graph is split into connected components and each is
/// solved exactly with min_cost_assignment, so sparse graphs stay cheap.
/// Output pairs are sorted by (left, right). Equal-weight alternatives are
/// resolved by the fixed scan order (ascending node index), so the result is
/// deterministic.
MatchPairs max_weight_matching(int n_left, int n_right, std::span<const WeightedEdge> edges);

}  // namespace trackmine
